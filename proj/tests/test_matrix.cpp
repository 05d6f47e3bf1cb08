#include <doctest.h>

#include <limits>

#include "rrl/matrix.hpp"
#include "rrl/rng.hpp"

using namespace rrl;

TEST_SUITE("matrix") {

TEST_CASE("matmul against hand-computed 2x3 * 3x2") {
  Matrix a(2, 3);
  a.data = {1, 2, 3, 4, 5, 6};
  Matrix b(3, 2);
  b.data = {7, 8, 9, 10, 11, 12};
  const Matrix c = matmul(a, b);
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 2);
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);
}

TEST_CASE("matmul shape mismatch throws") {
  Matrix a(2, 3), b(2, 2);
  CHECK_THROWS_AS(matmul(a, b), std::invalid_argument);
}

TEST_CASE("matmul_abt and matmul_atb agree with transpose + matmul") {
  Rng rng(7);
  Matrix a(4, 5), b(3, 5), c(4, 6);
  for (auto& x : a.data) x = rng.uniform(-1, 1);
  for (auto& x : b.data) x = rng.uniform(-1, 1);
  for (auto& x : c.data) x = rng.uniform(-1, 1);

  const Matrix abt = matmul_abt(a, b);
  const Matrix abt_ref = matmul(a, transpose(b));
  REQUIRE(abt.same_shape(abt_ref));
  for (std::size_t i = 0; i < abt.data.size(); ++i)
    CHECK(abt.data[i] == doctest::Approx(abt_ref.data[i]).epsilon(1e-14));

  const Matrix atc = matmul_atb(a, c);
  const Matrix atc_ref = matmul(transpose(a), c);
  REQUIRE(atc.same_shape(atc_ref));
  for (std::size_t i = 0; i < atc.data.size(); ++i)
    CHECK(atc.data[i] == doctest::Approx(atc_ref.data[i]).epsilon(1e-14));
}

TEST_CASE("hstack concatenates columns in order") {
  Matrix a(2, 1), b(2, 2);
  a.data = {1, 2};
  b.data = {3, 4, 5, 6};
  const Matrix c = hstack({&a, &b});
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 3);
  CHECK(c(0, 0) == 1);
  CHECK(c(0, 1) == 3);
  CHECK(c(0, 2) == 4);
  CHECK(c(1, 0) == 2);
  CHECK(c(1, 1) == 5);
  CHECK(c(1, 2) == 6);
}

TEST_CASE("slice_cols extracts the requested range") {
  Matrix m(2, 4);
  m.data = {0, 1, 2, 3, 4, 5, 6, 7};
  const Matrix s = slice_cols(m, 1, 3);
  REQUIRE(s.rows == 2);
  REQUIRE(s.cols == 2);
  CHECK(s(0, 0) == 1);
  CHECK(s(0, 1) == 2);
  CHECK(s(1, 0) == 5);
  CHECK(s(1, 1) == 6);
}

TEST_CASE("all_finite flags NaN and Inf") {
  Matrix m(1, 2);
  m.data = {1.0, 2.0};
  CHECK(all_finite(m));
  m.data[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(m));
  m.data[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(m));
}

}  // TEST_SUITE
