#include "chanent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chanent/errors.hpp"

namespace chanent::linalg {

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    strides[k] = strides[k + 1] * dims[k + 1];
  }
  return strides;
}

void check_dims(const Matrix& m, const std::vector<int>& dims) {
  if (m.rows() != m.cols()) {
    throw ValidationError("subsystem operation needs a square matrix, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  for (int d : dims) {
    if (d < 1) throw ValidationError("subsystem dimensions must be positive");
  }
  if (product(dims) != m.rows()) {
    std::ostringstream os;
    os << "subsystem dimensions multiply to " << product(dims)
       << " but the matrix has dimension " << m.rows();
    throw ValidationError(os.str());
  }
}

double spectral_scale(const RealVector& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

}  // namespace

double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigenDecomposition hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("hermitian_eig: matrix is " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", not square");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double diff = std::abs(m(i, j) - std::conj(m(j, i)));
      if (!(diff <= kHermitianTol)) {
        std::ostringstream os;
        os << "hermitian_eig: entry (" << i << ", " << j
           << ") differs from the conjugate of (" << j << ", " << i
           << ") by " << diff;
        throw ValidationError(os.str());
      }
    }
  }
  return eigh(m);
}

HermitianEigenDecomposition eigh(const Matrix& m) {
  const Matrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix matrix_func(const Matrix& m, const std::function<double(double)>& f,
                   ZeroPolicy zero_policy, double cutoff) {
  return matrix_func(hermitian_eig(m), f, zero_policy, cutoff);
}

Matrix matrix_func(const HermitianEigenDecomposition& eig,
                   const std::function<double(double)>& f,
                   ZeroPolicy zero_policy, double cutoff) {
  const RealVector& lam = eig.eigenvalues;
  const double threshold = cutoff * spectral_scale(lam);
  RealVector mapped(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (zero_policy == ZeroPolicy::support && lam(i) <= threshold) {
      mapped(i) = 0.0;
      continue;
    }
    const double v = f(lam(i));
    if (std::isinf(v) && lam(i) > threshold) {
      std::ostringstream os;
      os << "matrix_func: overflow at eigenvalue " << lam(i);
      throw NumericalError(os.str());
    }
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "matrix_func: function is undefined at eigenvalue " << lam(i);
      throw DomainError(os.str());
    }
    mapped(i) = v;
  }
  const Matrix& vecs = eig.eigenvectors;
  return vecs * mapped.asDiagonal() * vecs.adjoint();
}

Matrix frechet_gradient(const HermitianEigenDecomposition& eig_x,
                        const Matrix& z,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime,
                        double cutoff) {
  const RealVector& lam = eig_x.eigenvalues;
  const Matrix& u = eig_x.eigenvectors;
  const Eigen::Index n = lam.size();
  const double threshold = cutoff * spectral_scale(lam);
  std::vector<bool> kept(n);
  RealVector fl(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kept[i] = lam(i) > threshold;
    fl(i) = kept[i] ? f(lam(i)) : 0.0;
  }
  Matrix zt = u.adjoint() * z * u;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!kept[i] || !kept[j]) {
        zt(i, j) = 0.0;
        continue;
      }
      const double gap = lam(i) - lam(j);
      const double scale = std::max(std::abs(lam(i)), std::abs(lam(j)));
      double dd;
      if (std::abs(gap) <= 1e-10 * scale) {
        dd = fprime(0.5 * (lam(i) + lam(j)));
      } else {
        dd = (fl(i) - fl(j)) / gap;
      }
      zt(i, j) *= dd;
    }
  }
  return u * zt * u.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
  check_dims(m, dims);
  const int nsys = static_cast<int>(dims.size());
  std::vector<bool> is_kept(nsys, false);
  for (int k : keep) {
    if (k < 0 || k >= nsys) {
      throw ValidationError("partial_trace: subsystem index " +
                            std::to_string(k) + " out of range");
    }
    is_kept[k] = true;
  }
  const std::vector<int> strides = strides_of(dims);
  std::vector<int> kept_dims, kept_strides, traced_dims, traced_strides;
  for (int k = 0; k < nsys; ++k) {
    if (is_kept[k]) {
      kept_dims.push_back(dims[k]);
      kept_strides.push_back(strides[k]);
    } else {
      traced_dims.push_back(dims[k]);
      traced_strides.push_back(strides[k]);
    }
  }
  // Offsets into the full index for every multi-index of a factor group.
  auto offsets = [](const std::vector<int>& ds, const std::vector<int>& ss) {
    std::vector<int> out{0};
    for (std::size_t k = 0; k < ds.size(); ++k) {
      std::vector<int> next;
      next.reserve(out.size() * ds[k]);
      for (int base : out) {
        for (int i = 0; i < ds[k]; ++i) next.push_back(base + i * ss[k]);
      }
      out = std::move(next);
    }
    return out;
  };
  const std::vector<int> kept_off = offsets(kept_dims, kept_strides);
  const std::vector<int> traced_off = offsets(traced_dims, traced_strides);
  const int nk = static_cast<int>(kept_off.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (int r = 0; r < nk; ++r) {
    for (int c = 0; c < nk; ++c) {
      cplx acc = 0.0;
      for (int t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm) {
  check_dims(m, dims);
  const int nsys = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != nsys) {
    throw ValidationError("permute_subsystems: permutation length mismatch");
  }
  std::vector<int> seen(nsys, 0);
  for (int p : perm) {
    if (p < 0 || p >= nsys || seen[p]++) {
      throw ValidationError("permute_subsystems: not a permutation");
    }
  }
  std::vector<int> new_dims(nsys);
  for (int k = 0; k < nsys; ++k) new_dims[k] = dims[perm[k]];
  const std::vector<int> old_strides = strides_of(dims);
  const std::vector<int> new_strides = strides_of(new_dims);
  const int n = static_cast<int>(m.rows());
  // map[new index] = old index
  std::vector<int> map(n);
  for (int idx = 0; idx < n; ++idx) {
    int rem = idx, old = 0;
    for (int k = 0; k < nsys; ++k) {
      const int digit = rem / new_strides[k];
      rem %= new_strides[k];
      old += digit * old_strides[perm[k]];
    }
    map[idx] = old;
  }
  Matrix out(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out(r, c) = m(map[r], map[c]);
  }
  return out;
}

double schatten_norm(const Matrix& m, double p) {
  if (!(p >= 1.0)) {
    throw DomainError("schatten_norm: p must be >= 1");
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s.maxCoeff();
  const double smax = s.maxCoeff();
  if (smax == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / smax, p);
  return smax * std::pow(acc, 1.0 / p);
}

Vector canonical_purification(const Matrix& rho) {
  const HermitianEigenDecomposition eig = hermitian_eig(rho);
  const int d = static_cast<int>(rho.rows());
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double w = std::sqrt(std::max(eig.eigenvalues(i), 0.0));
    if (w == 0.0) continue;
    // |i>_S (x) |v_i>_A occupies the block starting at i*d.
    phi.segment(static_cast<Eigen::Index>(i) * d, d) =
        w * eig.eigenvectors.col(i);
  }
  return phi;
}

Matrix gamma_operator(int d) {
  Vector g = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) g(i * d + i) = 1.0;
  return outer(g);
}

Matrix max_entangled_state(int d) { return gamma_operator(d) / double(d); }

Matrix maximally_mixed(int d) { return Matrix::Identity(d, d) / double(d); }

Matrix outer(const Vector& v) { return v * v.adjoint(); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double trace_real(const Matrix& m) { return m.trace().real(); }

}  // namespace chanent::linalg
