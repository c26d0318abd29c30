#include "chanent/state_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chanent/errors.hpp"

namespace chanent {

using linalg::eigh;
using linalg::kDefaultCutoff;
using linalg::matrix_func;
using linalg::ZeroPolicy;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double spectral_threshold(const RealVector& lam) {
  return kDefaultCutoff * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
}

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0) || std::isnan(alpha)) {
    std::ostringstream os;
    os << what << ": alpha must be positive, got " << alpha;
    throw DomainError(os.str());
  }
  if (alpha == 1.0) {
    throw DomainError(std::string(what) +
                      ": alpha = 1 is excluded; use the von Neumann quantity instead");
  }
}

void check_bipartite(const Matrix& rho, const std::vector<int>& dims, int condition_on,
                     const char* what) {
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1 ||
      static_cast<Eigen::Index>(dims[0]) * dims[1] != rho.rows() || rho.rows() != rho.cols()) {
    throw ValidationError(std::string(what) + ": dims do not match a bipartite operator of size " +
                          std::to_string(rho.rows()));
  }
  if (condition_on != 0 && condition_on != 1) {
    throw ValidationError(std::string(what) + ": condition_on must be 0 or 1");
  }
}

double trace_power(const Matrix& m, double p) {
  const auto eig = eigh(m);
  const double thr = spectral_threshold(eig.eigenvalues);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double l = eig.eigenvalues(i);
    if (l > thr) s += std::pow(l, p);
  }
  return s;
}

DivergenceValue finish(double value, double mass) {
  DivergenceValue out;
  out.value = value;
  out.support_warning = mass > kSupportTol;
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m, std::vector<int> dims) : m_(std::move(m)), dims_(std::move(dims)) {
  require_state(m_, "DensityMatrix");
  if (dims_.empty()) dims_ = {dim()};
  const long prod = std::accumulate(dims_.begin(), dims_.end(), 1L, std::multiplies<long>());
  if (prod != dim()) {
    throw ValidationError("DensityMatrix: subsystem dims multiply to " + std::to_string(prod) +
                          " but the matrix is " + std::to_string(dim()) + "-dimensional");
  }
}

void require_state(const Matrix& m, const char* context) {
  const auto eig = linalg::hermitian_eig(m);
  const double tr = eig.eigenvalues.sum();
  if (std::abs(tr - 1.0) > kStateTol) {
    std::ostringstream os;
    os << context << ": trace is " << tr << ", expected 1";
    throw ValidationError(os.str());
  }
  if (eig.eigenvalues(0) < -kStateTol) {
    std::ostringstream os;
    os << context << ": minimum eigenvalue " << eig.eigenvalues(0) << " is negative";
    throw ValidationError(os.str());
  }
}

double null_space_mass(const Matrix& rho, const Matrix& sigma) {
  const auto eig = eigh(sigma);
  const double thr = spectral_threshold(eig.eigenvalues);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) <= thr) {
      const Vector v = eig.eigenvectors.col(i);
      mass += (v.adjoint() * rho * v)(0, 0).real();
    }
  }
  return std::max(mass, 0.0);
}

double von_neumann_entropy(const Matrix& rho) {
  const auto eig = eigh(rho);
  const double thr = spectral_threshold(eig.eigenvalues);
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double l = eig.eigenvalues(i);
    if (l > thr) h -= l * std::log(l);
  }
  return h / kLn2;
}

double min_entropy(const Matrix& rho) { return -std::log2(eigh(rho).eigenvalues.maxCoeff()); }

double renyi_entropy(const Matrix& rho, double alpha) {
  if (std::isinf(alpha) && alpha > 0) return min_entropy(rho);
  check_alpha(alpha, "renyi_entropy");
  return std::log2(trace_power(rho, alpha)) / (1.0 - alpha);
}

DivergenceValue relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const double mass = null_space_mass(rho, sigma);
  if (mass > kSupportWarn) return DivergenceValue::infinite();
  const auto er = eigh(rho);
  const double thr = spectral_threshold(er.eigenvalues);
  double rlr = 0.0;
  for (Eigen::Index i = 0; i < er.eigenvalues.size(); ++i) {
    const double l = er.eigenvalues(i);
    if (l > thr) rlr += l * std::log(l);
  }
  const Matrix log_sigma = matrix_func(sigma, [](double x) { return std::log(x); });
  const double rls = (rho * log_sigma).trace().real();
  return finish((rlr - rls) / kLn2, mass);
}

double sandwiched_quasi(const Matrix& rho, const Matrix& sigma, double alpha) {
  const double g = (1.0 - alpha) / (2.0 * alpha);
  const Matrix s = matrix_func(sigma, [g](double x) { return std::pow(x, g); });
  return trace_power(s * rho * s, alpha);
}

double petz_quasi(const Matrix& rho, const Matrix& sigma, double alpha) {
  const Matrix ra = matrix_func(rho, [alpha](double x) { return std::pow(x, alpha); });
  const Matrix sa = matrix_func(sigma, [alpha](double x) { return std::pow(x, 1.0 - alpha); });
  return (ra * sa).trace().real();
}

namespace {

DivergenceValue renyi_from_quasi(double q, double alpha, double mass) {
  if (!(q > 0.0)) {
    DivergenceValue out = DivergenceValue::infinite();
    out.support_violation = alpha > 1.0;
    return out;
  }
  return finish(std::log2(q) / (alpha - 1.0), alpha > 1.0 ? mass : 0.0);
}

}  // namespace

DivergenceValue sandwiched_renyi(const Matrix& rho, const Matrix& sigma, double alpha) {
  check_alpha(alpha, "sandwiched_renyi");
  double mass = 0.0;
  if (alpha > 1.0) {
    mass = null_space_mass(rho, sigma);
    if (mass > kSupportWarn) return DivergenceValue::infinite();
  }
  return renyi_from_quasi(sandwiched_quasi(rho, sigma, alpha), alpha, mass);
}

DivergenceValue petz_renyi(const Matrix& rho, const Matrix& sigma, double alpha) {
  check_alpha(alpha, "petz_renyi");
  double mass = 0.0;
  if (alpha > 1.0) {
    mass = null_space_mass(rho, sigma);
    if (mass > kSupportWarn) return DivergenceValue::infinite();
  }
  return renyi_from_quasi(petz_quasi(rho, sigma, alpha), alpha, mass);
}

DivergenceValue max_relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const double mass = null_space_mass(rho, sigma);
  if (mass > kSupportWarn) return DivergenceValue::infinite();
  const Matrix s = matrix_func(sigma, [](double x) { return 1.0 / std::sqrt(x); });
  const double top = eigh(s * rho * s).eigenvalues.maxCoeff();
  if (!(top > 0.0)) return DivergenceValue{-std::numeric_limits<double>::infinity(), false, false};
  return finish(std::log2(top), mass);
}

std::string to_string(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::relative: return "relative";
    case DivergenceKind::sandwiched_renyi: return "sandwiched_renyi";
    case DivergenceKind::petz_renyi: return "petz_renyi";
    case DivergenceKind::max: return "max";
  }
  return "unknown";
}

DivergenceKind divergence_kind_from_string(const std::string& name) {
  if (name == "relative") return DivergenceKind::relative;
  if (name == "sandwiched_renyi" || name == "renyi" || name == "sandwiched") {
    return DivergenceKind::sandwiched_renyi;
  }
  if (name == "petz_renyi" || name == "petz") return DivergenceKind::petz_renyi;
  if (name == "max") return DivergenceKind::max;
  throw ValidationError("unknown divergence kind '" + name +
                        "' (expected relative, renyi, petz or max)");
}

DivergenceValue state_divergence(DivergenceKind kind, const Matrix& rho, const Matrix& sigma,
                                 double alpha) {
  switch (kind) {
    case DivergenceKind::relative: return relative_entropy(rho, sigma);
    case DivergenceKind::sandwiched_renyi: return sandwiched_renyi(rho, sigma, alpha);
    case DivergenceKind::petz_renyi: return petz_renyi(rho, sigma, alpha);
    case DivergenceKind::max: return max_relative_entropy(rho, sigma);
  }
  throw ValidationError("unknown divergence kind");
}

double conditional_entropy(const Matrix& rho, const std::vector<int>& dims, int condition_on) {
  check_bipartite(rho, dims, condition_on, "conditional_entropy");
  return von_neumann_entropy(rho) -
         von_neumann_entropy(linalg::partial_trace(rho, dims, {condition_on}));
}

Matrix identity_times_marginal(const Matrix& rho, const std::vector<int>& dims, int condition_on) {
  check_bipartite(rho, dims, condition_on, "identity_times_marginal");
  const Matrix marginal = linalg::partial_trace(rho, dims, {condition_on});
  const int other = dims[1 - condition_on];
  const Matrix id = Matrix::Identity(other, other);
  return condition_on == 1 ? linalg::kron(id, marginal) : linalg::kron(marginal, id);
}

double conditional_renyi_fixed(const Matrix& rho, const std::vector<int>& dims, double alpha,
                               int condition_on, RenyiFlavor flavor) {
  const Matrix sigma = identity_times_marginal(rho, dims, condition_on);
  if (std::isinf(alpha) && alpha > 0) {
    if (flavor == RenyiFlavor::petz) {
      throw DomainError("conditional_renyi_fixed: alpha = inf is defined for the sandwiched family only");
    }
    return -max_relative_entropy(rho, sigma).value;
  }
  const DivergenceValue d = flavor == RenyiFlavor::sandwiched ? sandwiched_renyi(rho, sigma, alpha)
                                                             : petz_renyi(rho, sigma, alpha);
  return -d.value;
}

double petz_conditional_optimized(const Matrix& rho, const std::vector<int>& dims, double alpha,
                                  int condition_on) {
  check_bipartite(rho, dims, condition_on, "petz_conditional_optimized");
  check_alpha(alpha, "petz_conditional_optimized");
  const Matrix ra = matrix_func(rho, [alpha](double x) { return std::pow(x, alpha); });
  const Matrix reduced = linalg::partial_trace(ra, dims, {condition_on});
  const double q = trace_power(reduced, 1.0 / alpha);
  return alpha / (1.0 - alpha) * std::log2(q);
}

}  // namespace chanent
