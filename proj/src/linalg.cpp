#include "nvpump/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nvpump/errors.hpp"

namespace nvpump {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

double opnorm1(const Matrix& a) {
  double norm = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
    norm = std::max(norm, col);
  }
  return norm;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

bool all_finite(const Matrix& a) {
  for (double v : a.data())
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

// In-place partial-pivot LU; returns permutation parity unused, fills pivots.
void lu_decompose(Matrix& a, std::vector<int>& perm, std::vector<double>* pivots) {
  const int n = a.rows();
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(perm[k], perm[p]);
    }
    const double piv = a(k, k);
    if (pivots) pivots->push_back(std::abs(piv));
    if (piv == 0.0) continue;  // leaves a structurally singular factorization
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / piv;
      a(i, k) = f;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
}

}  // namespace

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const int n = a.rows();
  std::vector<int> perm;
  lu_decompose(a, perm, nullptr);
  for (int k = 0; k < n; ++k)
    if (a(k, k) == 0.0) throw invariant_violation("solve_linear: singular matrix");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
    x[i] /= a(i, i);
  }
  return x;
}

std::vector<double> lu_pivot_magnitudes(Matrix a) {
  std::vector<int> perm;
  std::vector<double> pivots;
  lu_decompose(a, perm, &pivots);
  return pivots;
}

// Solves (v - u) x = (v + u) column by column, reusing one factorization.
static Matrix pade_solve(const Matrix& u, const Matrix& v) {
  const int n = u.rows();
  Matrix lhs = v - u;
  Matrix rhs = v + u;
  std::vector<int> perm;
  lu_decompose(lhs, perm, nullptr);
  for (int k = 0; k < n; ++k)
    if (lhs(k, k) == 0.0) throw invariant_violation("expm: singular Pade denominator");
  Matrix x(n, n);
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = rhs(perm[i], j);
    for (int i = 1; i < n; ++i)
      for (int k = 0; k < i; ++k) col[i] -= lhs(i, k) * col[k];
    for (int i = n - 1; i >= 0; --i) {
      for (int k = i + 1; k < n; ++k) col[i] -= lhs(i, k) * col[k];
      col[i] /= lhs(i, i);
    }
    for (int i = 0; i < n; ++i) x(i, j) = col[i];
  }
  return x;
}

Matrix expm(Matrix a) {
  const int n = a.rows();
  if (!all_finite(a)) throw invariant_violation("expm: non-finite input");

  // Degree-13 Pade coefficients.
  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
  static const double theta13 = 5.371920351148152;

  const double norm = opnorm1(a);
  int s = 0;
  if (norm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    a = std::ldexp(1.0, -s) * a;
  }

  const Matrix eye = Matrix::identity(n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;

  Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                  b[3] * a2 + b[1] * eye);
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
             b[0] * eye;

  Matrix x = pade_solve(u, v);
  for (int k = 0; k < s; ++k) x = x * x;

  if (!all_finite(x)) throw invariant_violation("expm: non-finite result");
  return x;
}

}  // namespace nvpump
