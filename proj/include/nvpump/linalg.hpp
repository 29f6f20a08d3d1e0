#pragma once

#include <vector>

namespace nvpump {

// Small dense row-major matrix of doubles. Sized for the six-level model and
// its accumulator-augmented variants (dimension <= ~12); not a general-purpose
// linear algebra type.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  const std::vector<double>& data() const { return a_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

// Max absolute column sum (operator 1-norm).
double opnorm1(const Matrix& a);

// Largest |entry| of a - b; matrices must have equal shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

// exp(a) by scaling and squaring around a degree-13 Pade approximant.
// Relative accuracy is at machine-precision level for the generator matrices
// this project produces (real spectra in the left half plane).
Matrix expm(Matrix a);

// Solves a x = b by LU with partial pivoting. Throws invariant_violation if a
// pivot vanishes completely.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Magnitudes of the diagonal pivots from partial-pivot LU elimination of a.
// Near-zero pivots count the rank deficiency.
std::vector<double> lu_pivot_magnitudes(Matrix a);

}  // namespace nvpump
