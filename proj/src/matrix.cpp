#include "rrl/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace rrl {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: incompatible shapes");
  Matrix c(a.rows, b.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_abt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_abt: incompatible shapes");
  Matrix c(a.rows, b.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* brow = b.row_ptr(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      crow[j] = acc;
    }
  }
  return c;
}

Matrix matmul_atb(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_atb: incompatible shapes");
  Matrix c(a.cols, b.cols, 0.0);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* arow = a.row_ptr(k);
    const double* brow = b.row_ptr(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* crow = c.row_ptr(i);
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix hstack(std::initializer_list<const Matrix*> parts) {
  std::size_t rows = 0, cols = 0;
  for (const Matrix* p : parts) {
    if (rows == 0) rows = p->rows;
    if (p->rows != rows) throw std::invalid_argument("hstack: row count mismatch");
    cols += p->cols;
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.row_ptr(r);
    for (const Matrix* p : parts) {
      const double* src = p->row_ptr(r);
      for (std::size_t c = 0; c < p->cols; ++c) *dst++ = src[c];
    }
  }
  return out;
}

Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t end) {
  if (begin > end || end > m.cols) throw std::invalid_argument("slice_cols: bad range");
  Matrix out(m.rows, end - begin);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* src = m.row_ptr(r) + begin;
    double* dst = out.row_ptr(r);
    for (std::size_t c = 0; c < out.cols; ++c) dst[c] = src[c];
  }
  return out;
}

Matrix row_matrix(const std::vector<double>& v) {
  Matrix m(1, v.size());
  m.data = v;
  return m;
}

std::vector<double> first_column(const Matrix& m) {
  std::vector<double> v(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) v[r] = m(r, 0);
  return v;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

bool all_finite(const Matrix& m) {
  for (double x : m.data)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace rrl
