#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace rrl {

// Dense row-major matrix of doubles. Holds network weights, activations and
// gradients; shapes are always explicit, no broadcasting.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double value = 0.0)
      : rows(r), cols(c), data(r * c, value) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row_ptr(std::size_t r) { return data.data() + r * cols; }
  const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

  std::size_t size() const { return data.size(); }
  bool empty() const { return rows == 0 || cols == 0; }

  void fill(double value) { std::fill(data.begin(), data.end(), value); }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

// Column-wise concatenation; all parts must share the row count.
Matrix hstack(std::initializer_list<const Matrix*> parts);

// Copy of columns [begin, end).
Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t end);

Matrix row_matrix(const std::vector<double>& v);     // 1 x n
std::vector<double> first_column(const Matrix& m);

// C = A * B^T  (rows of both operands are contiguous dot products)
Matrix matmul_abt(const Matrix& a, const Matrix& b);

// C = A^T * B
Matrix matmul_atb(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

bool all_finite(const Matrix& m);
bool all_finite(const std::vector<double>& v);

}  // namespace rrl
