#include <catch2/catch_amalgamated.hpp>

#include "spacobi/matrix.hpp"

#include <limits>

using namespace spacobi;

TEST_CASE("DenseMatrix basic shape and storage") {
  DenseMatrix m(2, 3, 0.0);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  m(1, 2) = 5.0;
  REQUIRE(m(1, 2) == 5.0);
  REQUIRE(m.row(1)[2] == 5.0);
}

TEST_CASE("DenseMatrix rejects non-finite construction") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(DenseMatrix(1, 2, {1.0, nan}), NonFiniteError);
  REQUIRE_THROWS_AS(DenseMatrix({{1.0, inf}}), NonFiniteError);
  REQUIRE_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionMismatchError);
}

TEST_CASE("matmul and transpose") {
  const DenseMatrix a{{1, 2}, {3, 4}};
  const DenseMatrix b{{5, 6}, {7, 8}};
  const DenseMatrix c = matmul(a, b);
  REQUIRE(c(0, 0) == 19.0);
  REQUIRE(c(0, 1) == 22.0);
  REQUIRE(c(1, 0) == 43.0);
  REQUIRE(c(1, 1) == 50.0);

  const DenseMatrix at = a.transposed();
  REQUIRE(at(0, 1) == 3.0);
  REQUIRE(at(1, 0) == 2.0);

  REQUIRE_THROWS_AS(matmul(a, DenseMatrix(3, 2)), DimensionMismatchError);
}

TEST_CASE("norms and arithmetic") {
  const DenseMatrix a{{3, 4}};
  REQUIRE(a.frobenius_norm() == Catch::Approx(5.0));
  REQUIRE(a.max_abs() == 4.0);

  DenseMatrix b = a;
  b += a;
  REQUIRE(b(0, 1) == 8.0);
  b *= 0.5;
  REQUIRE(b(0, 0) == 3.0);
  REQUIRE(frobenius_distance(a, b) == 0.0);

  REQUIRE(DenseMatrix::identity(3)(2, 2) == 1.0);
  REQUIRE(DenseMatrix::identity(3)(0, 2) == 0.0);
}
