#include "chanent/random.hpp"

#include <cmath>

namespace chanent {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base ^ (stream * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Matrix Rng::ginibre(int rows, int cols) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = complex_normal();
  }
  return g;
}

Matrix Rng::isometry(int rows, int cols) {
  const Matrix g = ginibre(rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR().topLeftCorner(cols, cols);
  for (int j = 0; j < cols; ++j) {
    const cplx diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

Vector Rng::pure_state(int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = complex_normal();
  return v / v.norm();
}

Matrix Rng::density_matrix(int d, int rank) {
  if (rank <= 0 || rank > d) rank = d;
  const Matrix g = ginibre(d, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return linalg::hermitian_part(rho);
}

std::vector<double> Rng::probability_vector(int n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - uniform());
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace chanent
