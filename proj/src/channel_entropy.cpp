#include "chanent/channel_entropy.hpp"

#include <cmath>
#include <sstream>

#include "chanent/errors.hpp"
#include "chanent/state_entropy.hpp"

namespace chanent {

using linalg::eigh;
using linalg::matrix_func;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void check_renyi_alpha(double alpha, const char* what) {
  if (!(alpha >= 0.5) || alpha == 1.0 || std::isinf(alpha)) {
    std::ostringstream os;
    os << what << ": alpha must lie in [1/2, 1) or (1, inf), got " << alpha;
    throw DomainError(os.str());
  }
}

}  // namespace

double dual_conditional_objective(const KrausChannel& complement, const Matrix& rho) {
  return von_neumann_entropy(rho) - von_neumann_entropy(complement.apply(rho));
}

Matrix dual_conditional_gradient(const KrausChannel& complement, const Matrix& rho) {
  const auto log2 = [](double v) { return std::log2(v); };
  return -matrix_func(rho, log2) + complement.adjoint_apply(matrix_func(complement.apply(rho), log2));
}

OptimizationReport channel_entropy(const KrausChannel& channel, const NumericPolicy& policy) {
  require_channel(channel, "channel_entropy");
  const KrausChannel comp = complementary(canonical_form(channel));
  MaximizeOptions options;
  options.route = "dual_conditional";
  OptimizationReport r = density_maximize(
      [&comp](const Matrix& rho) { return dual_conditional_objective(comp, rho); },
      Gradient([&comp](const Matrix& rho) { return dual_conditional_gradient(comp, rho); }),
      channel.dim_in(), policy, options);
  r.value = -r.value;
  return r;
}

OptimizationReport channel_merging_capacity(const KrausChannel& channel,
                                            const NumericPolicy& policy) {
  OptimizationReport r = channel_entropy(channel, policy);
  r.route = "merging_capacity";
  return r;
}

OptimizationReport channel_entropy_covariant(const KrausChannel& channel,
                                             const CovarianceGroup& group,
                                             const NumericPolicy& policy) {
  require_channel(channel, "channel_entropy_covariant");
  const CovarianceReport check = covariance_check(channel, group.input, group.output);
  if (!check.covariant || !check.one_design) {
    std::ostringstream os;
    os << "channel_entropy_covariant: covariance check failed (covariance defect "
       << check.covariance_defect << ", design defect " << check.design_defect << ")";
    throw PreconditionError(os.str());
  }
  const KrausChannel comp = complementary(canonical_form(channel));
  const Matrix pi = linalg::maximally_mixed(channel.dim_in());
  OptimizationReport r;
  r.value = -dual_conditional_objective(comp, pi);
  r.optimizer_state = pi;
  r.fw_gap = frank_wolfe_gap(dual_conditional_gradient(comp, pi), pi);
  r.converged = *r.fw_gap <= policy.opt_tol;
  r.restarts_used = 1;
  r.route = "covariant";
  return r;
}

double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

double closed_form_entropy(StandardKind kind, const StandardParams& params) {
  auto check_p = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("closed_form_entropy: p must lie in [0, 1]");
  };
  auto check_d = [](int d, int lo) {
    if (d < lo) throw ValidationError("closed_form_entropy: dimension must be at least " + std::to_string(lo));
  };
  switch (kind) {
    case StandardKind::erasure:
      check_p(params.p);
      check_d(params.d, 1);
      return binary_entropy(params.p) + (params.p - 1.0) * std::log2(double(params.d));
    case StandardKind::dephasing: {
      const auto& q = params.probs;
      check_d(static_cast<int>(q.size()), 1);
      double s = 0.0, h = 0.0;
      for (double v : q) {
        if (v < 0.0) throw ValidationError("closed_form_entropy: negative dephasing probability");
        s += v;
        h -= xlog2x(v);
      }
      if (std::abs(s - 1.0) > 1e-10) throw ValidationError("closed_form_entropy: probabilities do not sum to 1");
      return h - std::log2(double(q.size()));
    }
    case StandardKind::werner_holevo:
      check_d(params.d, 2);
      return std::log2((params.d - 1.0) / 2.0);
    case StandardKind::depolarizing: {
      check_p(params.p);
      check_d(params.d, 1);
      const double d2 = double(params.d) * params.d;
      const double a = 1.0 - params.p + params.p / d2;
      const double b = params.p / d2;
      return -xlog2x(a) - (d2 - 1.0) * xlog2x(b) - std::log2(double(params.d));
    }
    default:
      throw ValidationError("closed_form_entropy: no closed form for channel kind '" + to_string(kind) + "'");
  }
}

double sibson_objective(const KrausChannel& complement, const Matrix& rho, double beta) {
  const Matrix rb = matrix_func(rho, [beta](double v) { return std::pow(v, beta); });
  const Matrix x = complement.apply(rb);
  double t = 0.0;
  const auto eig = eigh(x);
  const double thr = linalg::kDefaultCutoff * eig.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > thr) t += std::pow(eig.eigenvalues(i), 1.0 / beta);
  }
  return beta / (1.0 - beta) * std::log2(t);
}

Matrix sibson_gradient(const KrausChannel& complement, const Matrix& rho, double beta) {
  const auto er = eigh(rho);
  const Matrix rb = matrix_func(er, [beta](double v) { return std::pow(v, beta); });
  const auto ex = eigh(complement.apply(rb));
  const double t = matrix_func(ex, [beta](double v) { return std::pow(v, 1.0 / beta); }).trace().real();
  const Matrix z = matrix_func(ex, [beta](double v) { return std::pow(v, 1.0 / beta - 1.0) / beta; });
  const Matrix w = linalg::frechet_gradient(
      er, complement.adjoint_apply(z), [beta](double v) { return std::pow(v, beta); },
      [beta](double v) { return beta * std::pow(v, beta - 1.0); });
  return beta / (1.0 - beta) / (t * kLn2) * w;
}

double purified_renyi_objective(const KrausChannel& channel, const Matrix& rho, double alpha) {
  const int d = channel.dim_in();
  const Vector phi = linalg::canonical_purification(rho);
  const Matrix omega = apply_channel(channel, linalg::outer(phi), d);
  return -conditional_renyi_fixed(omega, {d, channel.dim_out()}, alpha, 0);
}

OptimizationReport renyi_channel_entropy(const KrausChannel& channel, double alpha,
                                         const NumericPolicy& policy) {
  check_renyi_alpha(alpha, "renyi_channel_entropy");
  require_channel(channel, "renyi_channel_entropy");
  const KrausChannel canon = canonical_form(channel);
  const KrausChannel comp = complementary(canon);
  const double beta = 1.0 / alpha;
  MaximizeOptions options;
  options.concave = false;
  options.route = "sibson";
  OptimizationReport r = density_maximize(
      [&comp, beta](const Matrix& rho) { return sibson_objective(comp, rho, beta); },
      Gradient([&comp, beta](const Matrix& rho) { return sibson_gradient(comp, rho, beta); }),
      channel.dim_in(), policy, options);

  AscentOptions polish;
  polish.max_iter = std::min(policy.max_iter, 100);
  polish.tol = policy.opt_tol;
  polish.step_init = policy.step_init;
  polish.floor = 1e-9;
  const Objective a = [&canon, alpha](const Matrix& rho) {
    return purified_renyi_objective(canon, rho, alpha);
  };
  const AscentResult route_a = mirror_ascent(
      a, [&a](const Matrix& rho) { return finite_difference_gradient(a, rho); },
      r.optimizer_state, polish);
  r.cross_check = -route_a.value;
  r.value = -r.value;
  return r;
}

double min_entropy_channel(const KrausChannel& channel) {
  require_channel(channel, "min_entropy_channel");
  return -std::log2(eigh(kraus_to_choi(channel).gamma_choi).eigenvalues.maxCoeff());
}

OptimizationReport extended_min_entropy(const KrausChannel& channel, const NumericPolicy& policy) {
  require_channel(channel, "extended_min_entropy");
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const Matrix omega = kraus_to_choi(channel).normalized();
  const InnerResult inner = minimize_divergence(omega, tensor_identity_map(da, db),
                                                DivergenceKind::max, 0.0, policy,
                                                std::min(policy.max_iter, 1000));
  OptimizationReport r;
  r.value = -inner.value.value;
  r.optimizer_state = inner.sigma;
  r.iterations = inner.iterations;
  r.restarts_used = 1;
  r.converged = inner.converged;
  r.route = "smoothed_max_descent";
  return r;
}

OptimizationReport cb_one_to_alpha_norm(const KrausChannel& channel, double alpha,
                                        const NumericPolicy& policy) {
  if (!(alpha > 1.0) || std::isinf(alpha)) {
    std::ostringstream os;
    os << "cb_one_to_alpha_norm: alpha must exceed 1, got " << alpha;
    throw DomainError(os.str());
  }
  require_channel(channel, "cb_one_to_alpha_norm");
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const Matrix gamma = kraus_to_choi(channel).gamma_choi;
  const Matrix id_b = Matrix::Identity(db, db);
  const double e = 1.0 / (2.0 * alpha);
  auto power = [e](double v) { return std::pow(v, e); };
  const Objective f = [&, power](const Matrix& rho) {
    const Matrix s = linalg::kron(matrix_func(rho, power), id_b);
    return std::log2(linalg::schatten_norm(s * gamma * s, alpha));
  };
  const Gradient g = [&, power](const Matrix& rho) {
    const auto er = eigh(rho);
    const Matrix s = linalg::kron(matrix_func(er, power), id_b);
    const auto em = eigh(s * gamma * s);
    const double q = matrix_func(em, [alpha](double v) { return std::pow(v, alpha); }).trace().real();
    const Matrix mp = matrix_func(em, [alpha](double v) { return std::pow(v, alpha - 1.0); });
    const Matrix a = gamma * s * mp;
    const Matrix z = linalg::partial_trace(a + a.adjoint(), {da, db}, {0});
    const Matrix w = linalg::frechet_gradient(er, z, power,
                                              [e](double v) { return e * std::pow(v, e - 1.0); });
    return Matrix(w / (q * kLn2));
  };
  MaximizeOptions options;
  options.concave = false;
  options.route = "cb_norm";
  OptimizationReport r = density_maximize(f, g, da, policy, options);
  r.value = std::exp2(r.value);
  return r;
}

double renyi_from_cb_norm(double norm, double alpha) {
  return alpha / (1.0 - alpha) * std::log2(norm);
}

}  // namespace chanent
