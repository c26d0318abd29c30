#include "chanent/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanent/errors.hpp"
#include "chanent/random.hpp"

namespace chanent {

using linalg::eigh;
using linalg::frechet_gradient;
using linalg::matrix_func;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

struct LogIterate {
  Matrix log_rho;  // log of the normalized, floored iterate
  Matrix rho;
};

LogIterate from_log(const Matrix& log_unnormalized, double floor) {
  const auto eig = eigh(log_unnormalized);
  const double top = eig.eigenvalues.maxCoeff();
  const double lo = std::log(floor);
  RealVector shifted(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < shifted.size(); ++i) {
    shifted(i) = std::max(eig.eigenvalues(i) - top, lo);
  }
  const double log_z = std::log(shifted.array().exp().sum());
  shifted.array() -= log_z;
  const Matrix& v = eig.eigenvectors;
  LogIterate out;
  out.log_rho = v * shifted.cast<cplx>().asDiagonal() * v.adjoint();
  out.rho = v * shifted.array().exp().matrix().cast<cplx>().asDiagonal() * v.adjoint();
  return out;
}

LogIterate from_state(const Matrix& rho, double floor) {
  const auto eig = eigh(rho);
  const double top = std::max(eig.eigenvalues.maxCoeff(), 1e-300);
  RealVector logs(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    logs(i) = std::log(std::max(eig.eigenvalues(i), floor * top));
  }
  return from_log(eig.eigenvectors * logs.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint(),
                  floor);
}

double checked(double v, int iteration, const char* what) {
  if (std::isnan(v)) {
    std::ostringstream os;
    os << what << ": objective is NaN at iteration " << iteration;
    throw NumericalError(os.str());
  }
  return v;
}

}  // namespace

void NumericPolicy::validate() const {
  auto bad = [](const char* field) {
    throw ValidationError(std::string("numeric policy: ") + field + " must be positive");
  };
  if (!(eigen_cutoff > 0.0)) bad("eigen_cutoff");
  if (!(opt_tol > 0.0)) bad("opt_tol");
  if (max_iter <= 0) bad("max_iter");
  if (restarts <= 0) bad("restarts");
  if (!(step_init > 0.0)) bad("step_init");
}

double restart_tolerance(const NumericPolicy& policy) { return std::max(policy.opt_tol, 1e-6); }

Matrix finite_difference_gradient(const Objective& f, const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const double lmin = eigh(rho).eigenvalues.minCoeff();
  const double h = std::min(1e-5, std::max(lmin, 0.0) / 4.0);
  if (!(h > 0.0)) throw NumericalError("finite_difference_gradient: iterate is not positive definite");
  const double r = 1.0 / std::sqrt(2.0);
  Matrix g = Matrix::Zero(d, d);
  auto derivative = [&](const Matrix& b) {
    return (f(rho + h * b) - f(rho - h * b)) / (2.0 * h);
  };
  for (int j = 0; j < d; ++j) {
    Matrix b = Matrix::Zero(d, d);
    b(j, j) = 1.0;
    g(j, j) = derivative(b);
    for (int k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = r;
      sym(k, j) = r;
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = cplx(0.0, r);
      asym(k, j) = cplx(0.0, -r);
      const double cs = derivative(sym);
      const double ca = derivative(asym);
      // G = sum_b c_b B for the orthonormal basis {B}.
      g(j, k) += cs * r + ca * cplx(0.0, r);
      g(k, j) += cs * r + ca * cplx(0.0, -r);
    }
  }
  return g;
}

double frank_wolfe_gap(const Matrix& gradient, const Matrix& rho) {
  const double top = eigh(gradient).eigenvalues.maxCoeff();
  return std::max(top - (rho * gradient).trace().real(), 0.0);
}

AscentResult mirror_ascent(const Objective& f, const Gradient& grad, const Matrix& start,
                           const AscentOptions& options) {
  auto gradient_at = [&grad](const Matrix& rho, int it) {
    Matrix g = linalg::hermitian_part(grad(rho));
    if (!g.allFinite()) {
      std::ostringstream os;
      os << "mirror_ascent: gradient is not finite at iteration " << it;
      throw NumericalError(os.str());
    }
    return g;
  };
  LogIterate cur = from_state(start, options.floor);
  double fval = checked(f(cur.rho), 0, "mirror_ascent");
  Matrix g = gradient_at(cur.rho, 0);
  double gap = frank_wolfe_gap(g, cur.rho);
  double eta = options.step_init;
  const double eta_max = 1e4 * options.step_init;
  AscentResult out;
  int it = 0;
  for (;; ++it) {
    if (gap <= options.tol) {
      out.converged = true;
      break;
    }
    if (it >= options.max_iter) break;
    bool accepted = false;
    bool in_band = false;
    while (eta >= 1e-14 * options.step_init) {
      LogIterate next = from_log(cur.log_rho + (eta * kLn2) * g, options.floor);
      const double fnext = checked(f(next.rho), it + 1, "mirror_ascent");
      const double band = 1e-12 * std::max(1.0, std::abs(fval));
      in_band = std::abs(fnext - fval) <= band;
      if (fnext > fval + band || in_band) {
        Matrix gnext = gradient_at(next.rho, it + 1);
        const double gap_next = frank_wolfe_gap(gnext, next.rho);
        // Inside the rounding band of f, progress is judged by the gap.
        if (!in_band || gap_next < gap) {
          cur = std::move(next);
          fval = fnext;
          g = std::move(gnext);
          gap = gap_next;
          accepted = true;
          break;
        }
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    if (!in_band) eta = std::min(2.0 * eta, eta_max);
  }
  out.fw_gap = gap;
  out.value = fval;
  out.state = cur.rho;
  out.iterations = it;
  return out;
}

OptimizationReport density_maximize(const Objective& f, const std::optional<Gradient>& grad, int dim,
                                    const NumericPolicy& policy, const MaximizeOptions& options) {
  policy.validate();
  if (dim < 1) throw ValidationError("density_maximize: dimension must be positive");
  std::vector<Matrix> starts{linalg::maximally_mixed(dim)};
  if (!options.concave) {
    for (int k = 1; k < policy.restarts; ++k) {
      Rng rng(derive_seed(policy.seed, static_cast<std::uint64_t>(k)));
      starts.push_back(0.8 * linalg::outer(rng.pure_state(dim)) + 0.2 * linalg::maximally_mixed(dim));
    }
  }
  for (const Matrix& s : options.extra_starts) {
    if (s.rows() != dim || s.cols() != dim) {
      throw ValidationError("density_maximize: extra start has the wrong dimension");
    }
    starts.push_back(s);
  }

  AscentOptions ascent;
  ascent.max_iter = options.max_iter.value_or(policy.max_iter);
  ascent.tol = policy.opt_tol;
  ascent.step_init = policy.step_init;
  Gradient g;
  if (grad) {
    g = *grad;
  } else {
    g = [&f](const Matrix& rho) { return finite_difference_gradient(f, rho); };
    ascent.floor = 1e-9;
  }

  OptimizationReport report;
  report.route = options.route;
  int best = -1;
  AscentResult best_run;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    AscentResult run = mirror_ascent(f, g, starts[k], ascent);
    report.iterations += run.iterations;
    report.restart_values.push_back(run.value);
    if (best < 0 || run.value > best_run.value + policy.opt_tol) {
      best = static_cast<int>(k);
      best_run = std::move(run);
    }
  }
  report.restarts_used = static_cast<int>(starts.size());
  report.value = best_run.value;
  report.optimizer_state = best_run.state;
  if (options.concave) {
    report.fw_gap = best_run.fw_gap;
    report.converged = best_run.converged;
  }
  if (starts.size() > 1) {
    std::vector<double> sorted = report.restart_values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    report.restart_spread = sorted[0] - sorted[1];
    if (!options.concave) report.converged = *report.restart_spread <= restart_tolerance(policy);
  }
  return report;
}

LinearMap tensor_identity_map(int dim, int k, bool identity_first) {
  LinearMap m;
  m.dim_in = dim;
  const Matrix id = Matrix::Identity(k, k);
  if (identity_first) {
    m.apply = [id](const Matrix& s) { return linalg::kron(id, s); };
    m.adjoint = [dim, k](const Matrix& y) { return linalg::partial_trace(y, {k, dim}, {1}); };
  } else {
    m.apply = [id](const Matrix& s) { return linalg::kron(s, id); };
    m.adjoint = [dim, k](const Matrix& y) { return linalg::partial_trace(y, {dim, k}, {0}); };
  }
  return m;
}

namespace {

double pow_or_zero(double x, double p) { return std::pow(x, p); }

InnerResult minimize_max(const Matrix& x, const LinearMap& map, const NumericPolicy& policy,
                         int max_iter) {
  const Matrix xh = matrix_func(x, [](double v) { return std::sqrt(v); });
  auto k_of = [&](const Matrix& sigma, Matrix* y_inv) {
    const Matrix yi = matrix_func(map.apply(sigma), [](double v) { return 1.0 / v; });
    if (y_inv) *y_inv = yi;
    return Matrix(xh * yi * xh);
  };
  const int d = map.dim_in;
  Matrix sigma = linalg::maximally_mixed(d);
  const double lambda0 = eigh(k_of(sigma, nullptr)).eigenvalues.maxCoeff();
  InnerResult out;
  if (!(lambda0 > 0.0)) {
    out.value = DivergenceValue{-std::numeric_limits<double>::infinity(), false, false};
    out.sigma = sigma;
    out.converged = true;
    return out;
  }
  double mu = 0.1 * lambda0;
  const double mu_final = 1e-9 * lambda0;
  AscentOptions ascent;
  ascent.max_iter = max_iter;
  ascent.tol = policy.opt_tol * lambda0;
  ascent.step_init = policy.step_init;
  while (true) {
    const double m = mu;
    Objective f = [&, m](const Matrix& s) {
      const auto eig = eigh(k_of(s, nullptr));
      const double top = eig.eigenvalues.maxCoeff();
      return -(top + m * std::log((((eig.eigenvalues.array() - top) / m).exp()).sum()));
    };
    Gradient g = [&, m](const Matrix& s) {
      Matrix yi;
      const auto eig = eigh(k_of(s, &yi));
      const double top = eig.eigenvalues.maxCoeff();
      RealVector w = ((eig.eigenvalues.array() - top) / m).exp();
      w /= w.sum();
      const Matrix p = eig.eigenvectors * w.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
      return Matrix(map.adjoint(yi * xh * p * xh * yi));
    };
    AscentResult run = mirror_ascent(f, g, sigma, ascent);
    sigma = run.state;
    out.iterations += run.iterations;
    out.fw_gap = run.fw_gap / lambda0;
    out.converged = run.converged;
    if (mu <= mu_final * 1.0000001) break;
    mu = std::max(mu * 0.1, mu_final);
  }
  out.sigma = sigma;
  out.value = max_relative_entropy(x, map.apply(sigma));
  return out;
}

}  // namespace

InnerResult minimize_divergence(const Matrix& x, const LinearMap& map, DivergenceKind kind,
                                double alpha, const NumericPolicy& policy, int max_iter) {
  policy.validate();
  const int d = map.dim_in;
  const Matrix support = map.apply(Matrix::Identity(d, d));
  if (null_space_mass(x, support) > kSupportWarn) {
    InnerResult out;
    out.value = DivergenceValue::infinite();
    out.sigma = linalg::maximally_mixed(d);
    out.converged = true;
    return out;
  }
  if (kind == DivergenceKind::max) return minimize_max(x, map, policy, max_iter);
  if (kind != DivergenceKind::relative) {
    if (!(alpha > 0.0) || alpha == 1.0 || std::isinf(alpha)) {
      std::ostringstream os;
      os << "minimize_divergence: alpha must lie in (0,1) or (1,inf), got " << alpha;
      throw DomainError(os.str());
    }
  }

  Objective f;
  Gradient g;
  const double sign = alpha > 1.0 ? -1.0 : 1.0;
  switch (kind) {
    case DivergenceKind::relative:
      f = [&](const Matrix& s) {
        const Matrix logy = matrix_func(map.apply(s), [](double v) { return std::log2(v); });
        return (x * logy).trace().real();
      };
      g = [&](const Matrix& s) {
        const auto eig = eigh(map.apply(s));
        const Matrix w = frechet_gradient(
            eig, x, [](double v) { return std::log(v); }, [](double v) { return 1.0 / v; });
        return Matrix(map.adjoint(w) / kLn2);
      };
      break;
    case DivergenceKind::sandwiched_renyi: {
      const double gexp = (1.0 - alpha) / (2.0 * alpha);
      f = [&, sign](const Matrix& s) { return sign * sandwiched_quasi(x, map.apply(s), alpha); };
      g = [&, sign, gexp](const Matrix& s) {
        const auto eig = eigh(map.apply(s));
        const Matrix sh = matrix_func(eig, [gexp](double v) { return pow_or_zero(v, gexp); });
        const Matrix m = sh * x * sh;
        const Matrix mp = matrix_func(m, [alpha](double v) { return std::pow(v, alpha - 1.0); });
        const Matrix a = x * sh * mp;
        const Matrix z = a + a.adjoint();
        const Matrix w = frechet_gradient(
            eig, z, [gexp](double v) { return std::pow(v, gexp); },
            [gexp](double v) { return gexp * std::pow(v, gexp - 1.0); });
        return Matrix(sign * alpha * map.adjoint(w));
      };
      break;
    }
    case DivergenceKind::petz_renyi: {
      const Matrix xa = matrix_func(x, [alpha](double v) { return std::pow(v, alpha); });
      f = [&, sign, xa](const Matrix& s) {
        const Matrix ya = matrix_func(map.apply(s), [alpha](double v) { return std::pow(v, 1.0 - alpha); });
        return sign * (xa * ya).trace().real();
      };
      g = [&, sign, xa](const Matrix& s) {
        const auto eig = eigh(map.apply(s));
        const Matrix w = frechet_gradient(
            eig, xa, [alpha](double v) { return std::pow(v, 1.0 - alpha); },
            [alpha](double v) { return (1.0 - alpha) * std::pow(v, -alpha); });
        return Matrix(sign * map.adjoint(w));
      };
      break;
    }
    case DivergenceKind::max:
      break;
  }

  const Matrix start = linalg::maximally_mixed(d);
  AscentOptions ascent;
  ascent.max_iter = max_iter;
  ascent.tol = policy.opt_tol * std::max(1.0, std::abs(f(start)));
  ascent.step_init = policy.step_init;
  AscentResult run = mirror_ascent(f, g, start, ascent);
  InnerResult out;
  out.sigma = run.state;
  out.iterations = run.iterations;
  out.fw_gap = run.fw_gap;
  out.converged = run.converged;
  out.value = state_divergence(kind, x, map.apply(run.state), alpha);
  return out;
}

}  // namespace chanent
