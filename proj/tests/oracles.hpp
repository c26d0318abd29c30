#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's eigen-solver, matrix-function or tensor code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "chanent/linalg.hpp"

namespace oracle {

using chanent::cplx;
using chanent::Matrix;

inline constexpr double kLn2 = 0.69314718055994530942;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Tr_B of an operator on A (x) B.
inline Matrix trace_second(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

/// Tr_A of an operator on A (x) B.
inline Matrix trace_first(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

/// Real parts of the eigenvalues from the general (non-Hermitian) solver,
/// ascending.
inline std::vector<double> eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

inline double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 1e-15) h -= x * std::log2(x);
  return h;
}

inline double entropy(const Matrix& rho) { return shannon(eigenvalues(rho)); }

inline double renyi(const std::vector<double>& p, double alpha) {
  double s = 0.0;
  for (double x : p)
    if (x > 1e-15) s += std::pow(x, alpha);
  return std::log2(s) / (1.0 - alpha);
}

/// (1/(alpha-1)) log2 sum p^alpha q^(1-alpha).
inline double classical_renyi_divergence(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  return std::log2(s) / (alpha - 1.0);
}

inline double classical_relative_entropy(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += p[i] * std::log2(p[i] / q[i]);
  return s;
}

inline Matrix diag(const std::vector<double>& p) {
  Matrix m = Matrix::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return m;
}

/// Schur-Parlett matrix logarithm (base 2) of a positive definite matrix.
inline Matrix log2m(const Matrix& m) { return Matrix(m.log()) / kLn2; }

inline Matrix sqrtm(const Matrix& m) { return m.sqrt(); }

inline Matrix bloch(double x, double y, double z) {
  Matrix m(2, 2);
  m << cplx(1 + z, 0), cplx(x, -y), cplx(x, y), cplx(1 - z, 0);
  return 0.5 * m;
}

/// Sum_i K_i rho K_i^dagger by explicit loops.
inline Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const Matrix& k : kraus) out += k * rho * k.adjoint();
  return out;
}

/// [N^c(rho)]_{ij} = Tr(K_i rho K_j^dagger).
inline Matrix complement(const std::vector<Matrix>& kraus, const Matrix& rho) {
  const int n = static_cast<int>(kraus.size());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = (kraus[i] * rho * kraus[j].adjoint()).trace();
  return out;
}

/// Minimum of f over the Bloch ball: a coarse grid with about n^3 points
/// followed by shrinking local grids around the incumbent. Points on or
/// outside the sphere of radius r_max are skipped.
inline double bloch_min(const std::function<double(const Matrix&)>& f, int n = 22, int rounds = 6,
                        double r_max = 1.0) {
  double best = std::numeric_limits<double>::infinity();
  double bx = 0, by = 0, bz = 0;
  auto visit = [&](double x, double y, double z) {
    if (x * x + y * y + z * z > r_max * r_max) return;
    const double v = f(bloch(x, y, z));
    if (v < best) best = v, bx = x, by = y, bz = z;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        visit(-1 + 2.0 * i / (n - 1), -1 + 2.0 * j / (n - 1), -1 + 2.0 * k / (n - 1));
  double h = 2.0 / (n - 1);
  for (int r = 0; r < rounds; ++r) {
    const double cx = bx, cy = by, cz = bz;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j)
        for (int k = -4; k <= 4; ++k) visit(cx + h * i / 4, cy + h * j / 4, cz + h * k / 4);
    h /= 3.0;
  }
  return best;
}

/// H(N) for a qubit-input channel: -max over the Bloch ball of
/// H(rho) - H(N^c(rho)).
inline double channel_entropy_qubit(const std::vector<Matrix>& kraus) {
  return bloch_min([&](const Matrix& rho) { return entropy(complement(kraus, rho)) - entropy(rho); });
}

}  // namespace oracle
