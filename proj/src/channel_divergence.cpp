#include "chanent/channel_divergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chanent/channel_entropy.hpp"
#include "chanent/errors.hpp"

namespace chanent {

using linalg::eigh;

namespace {

constexpr int kAdversarialMaxOuter = 200;
constexpr double kAdversarialOuterTol = 1e-7;

void check_pair(const KrausChannel& n, const KrausChannel& m, const char* what) {
  require_channel(n, what);
  require_channel(m, what);
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out()) {
    std::ostringstream os;
    os << what << ": channels are " << n.dim_in() << "->" << n.dim_out() << " and " << m.dim_in()
       << "->" << m.dim_out();
    throw ValidationError(os.str());
  }
}

double normalized_alpha(DivergenceKind kind, double alpha, const char* what) {
  if (kind == DivergenceKind::relative || kind == DivergenceKind::max) return 0.0;
  if (!(alpha > 0.0) || alpha == 1.0 || std::isinf(alpha)) {
    std::ostringstream os;
    os << what << ": alpha must lie in (0,1) or (1,inf), got " << alpha;
    throw DomainError(os.str());
  }
  return alpha;
}

ChannelDivergenceResult make_result(DivergenceKind kind, DivergenceMode mode, double alpha) {
  ChannelDivergenceResult r;
  r.kind = kind;
  r.mode = mode;
  r.alpha = alpha;
  return r;
}

void set_value(ChannelDivergenceResult& r, const DivergenceValue& v) {
  r.infinite = v.support_violation || (std::isinf(v.value) && v.value > 0);
  r.value = r.infinite ? std::numeric_limits<double>::infinity() : v.value;
}

/// Replaces the inner optimum by `candidate` when that state does better.
void offer_candidate(InnerResult& inner, const Matrix& x, const LinearMap& map, const Matrix& candidate,
                     DivergenceKind kind, double alpha) {
  const DivergenceValue v = state_divergence(kind, x, map.apply(candidate), alpha);
  if (v.finite() && v.value < inner.value.value) {
    inner.value = v;
    inner.sigma = candidate;
  }
}

/// sigma_RA -> (id_R (x) M)(sigma_RA) together with its adjoint.
LinearMap reference_map(const KrausChannel& m) {
  const int da = m.dim_in();
  std::vector<Matrix> lifted;
  const Matrix id = Matrix::Identity(da, da);
  for (const Matrix& k : m.kraus()) lifted.push_back(linalg::kron(id, k));
  LinearMap map;
  map.dim_in = da * da;
  map.apply = [lifted](const Matrix& s) {
    Matrix out = Matrix::Zero(lifted[0].rows(), lifted[0].rows());
    for (const Matrix& k : lifted) out.noalias() += k * s * k.adjoint();
    return out;
  };
  map.adjoint = [lifted](const Matrix& y) {
    Matrix out = Matrix::Zero(lifted[0].cols(), lifted[0].cols());
    for (const Matrix& k : lifted) out.noalias() += k.adjoint() * y * k;
    return out;
  };
  return map;
}

Matrix top_choi_marginal(const KrausChannel& n) {
  const auto eig = eigh(kraus_to_choi(n).gamma_choi);
  const Vector v = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
  const Matrix r = linalg::partial_trace(linalg::outer(v), {n.dim_in(), n.dim_out()}, {0});
  return Matrix(r.transpose());
}

void attach_cross_check(ChannelDivergenceResult& r, const KrausChannel& n, const KrausChannel& m,
                        const NumericPolicy& policy) {
  if (!is_randomizing(m)) return;
  const double log_b = std::log2(double(n.dim_out()));
  if (r.kind == DivergenceKind::relative) r.cross_check = log_b - channel_entropy(n, policy).value;
  if (r.kind == DivergenceKind::max) r.cross_check = log_b - min_entropy_channel(n);
}

}  // namespace

std::string to_string(DivergenceMode mode) {
  switch (mode) {
    case DivergenceMode::generalized: return "generalized";
    case DivergenceMode::choi: return "choi";
    case DivergenceMode::adversarial_choi: return "adversarial_choi";
    case DivergenceMode::adversarial: return "adversarial";
  }
  return "unknown";
}

std::string to_string(Exactness exactness) {
  switch (exactness) {
    case Exactness::closed_form: return "closed_form";
    case Exactness::certified: return "certified";
    case Exactness::heuristic_bound: return "heuristic_bound";
  }
  return "unknown";
}

bool is_randomizing(const KrausChannel& channel) {
  return choi_distance(channel, randomizing_channel(channel.dim_in(), channel.dim_out())) <= 1e-12;
}

Vector smooth_purification(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const Matrix s = linalg::matrix_func(rho, [](double v) { return std::sqrt(v); });
  Vector psi(d * d);
  for (int i = 0; i < d; ++i) {
    for (int a = 0; a < d; ++a) psi(i * d + a) = s(a, i);
  }
  return psi;
}

ChannelDivergenceResult choi_divergence(const KrausChannel& n, const KrausChannel& m,
                                        DivergenceKind kind, double alpha) {
  check_pair(n, m, "choi_divergence");
  ChannelDivergenceResult r =
      make_result(kind, DivergenceMode::choi, normalized_alpha(kind, alpha, "choi_divergence"));
  set_value(r, state_divergence(kind, kraus_to_choi(n).normalized(), kraus_to_choi(m).normalized(),
                                r.alpha));
  r.exactness = Exactness::closed_form;
  r.optimizer_state = linalg::maximally_mixed(n.dim_in());
  return r;
}

ChannelDivergenceResult generalized_channel_divergence(const KrausChannel& n, const KrausChannel& m,
                                                       DivergenceKind kind, double alpha,
                                                       const NumericPolicy& policy) {
  check_pair(n, m, "generalized_channel_divergence");
  const double a = normalized_alpha(kind, alpha, "generalized_channel_divergence");
  ChannelDivergenceResult base = choi_divergence(n, m, kind, a);
  ChannelDivergenceResult r = make_result(kind, DivergenceMode::generalized, a);
  if (kind == DivergenceKind::max || base.infinite) {
    r.value = base.value;
    r.infinite = base.infinite;
    r.exactness = Exactness::closed_form;
    r.optimizer_state = base.optimizer_state;
    attach_cross_check(r, n, m, policy);
    return r;
  }
  const int da = n.dim_in();
  const Objective f = [&](const Matrix& rho) {
    const Matrix psi = linalg::outer(smooth_purification(rho));
    return state_divergence(kind, apply_channel(n, psi, da), apply_channel(m, psi, da), a).value;
  };
  MaximizeOptions options;
  options.concave = kind == DivergenceKind::relative && is_randomizing(m);
  options.route = "purified_sup";
  const OptimizationReport rep = density_maximize(f, std::nullopt, da, policy, options);
  r.value = rep.value;
  r.iterations = rep.iterations;
  r.optimizer_state = rep.optimizer_state;
  if (options.concave) {
    r.certificate = rep.fw_gap;
    r.exactness = rep.converged ? Exactness::certified : Exactness::heuristic_bound;
  } else {
    r.certificate = rep.restart_spread;
    r.exactness = Exactness::heuristic_bound;
  }
  attach_cross_check(r, n, m, policy);
  return r;
}

ChannelDivergenceResult adversarial_choi_divergence(const KrausChannel& n, const KrausChannel& m,
                                                    DivergenceKind kind, double alpha,
                                                    const NumericPolicy& policy) {
  check_pair(n, m, "adversarial_choi_divergence");
  ChannelDivergenceResult r = make_result(
      kind, DivergenceMode::adversarial_choi, normalized_alpha(kind, alpha, "adversarial_choi_divergence"));
  const Matrix x = kraus_to_choi(n).normalized();
  const LinearMap map = reference_map(m);
  InnerResult inner = minimize_divergence(x, map, kind, r.alpha, policy, kInnerMaxIter);
  if (!inner.value.support_violation) {
    offer_candidate(inner, x, map, linalg::max_entangled_state(n.dim_in()), kind, r.alpha);
  }
  set_value(r, inner.value);
  r.iterations = inner.iterations;
  r.optimizer_state = inner.sigma;
  r.certificate = inner.fw_gap;
  r.exactness = kind == DivergenceKind::relative && inner.converged ? Exactness::certified
                                                                    : Exactness::heuristic_bound;
  return r;
}

ChannelDivergenceResult adversarial_divergence(const KrausChannel& n, const KrausChannel& m,
                                               DivergenceKind kind, double alpha,
                                               const NumericPolicy& policy) {
  check_pair(n, m, "adversarial_divergence");
  const double a = normalized_alpha(kind, alpha, "adversarial_divergence");
  ChannelDivergenceResult r = make_result(kind, DivergenceMode::adversarial, a);
  const int da = n.dim_in();
  const LinearMap map = reference_map(m);

  struct Cache {
    Matrix rho;
    InnerResult inner;
  };
  Cache cache_store;
  Cache* cache = &cache_store;
  int inner_iterations = 0;
  auto solve = [&](const Matrix& rho) -> const InnerResult& {
    if (cache->rho.size() == rho.size() && cache->rho == rho) return cache->inner;
    const Matrix psi = linalg::outer(smooth_purification(rho));
    const Matrix x = apply_channel(n, psi, da);
    cache->inner = minimize_divergence(x, map, kind, a, policy, kInnerMaxIter);
    if (!cache->inner.value.support_violation) offer_candidate(cache->inner, x, map, psi, kind, a);
    cache->rho = rho;
    inner_iterations += cache->inner.iterations;
    return cache->inner;
  };
  const Objective f = [&](const Matrix& rho) { return solve(rho).value.value; };
  const Gradient g = [&](const Matrix& rho) {
    const Matrix target = map.apply(solve(rho).sigma);
    const Objective fixed = [&](const Matrix& x) {
      const Matrix psi = linalg::outer(smooth_purification(x));
      return state_divergence(kind, apply_channel(n, psi, da), target, a).value;
    };
    return finite_difference_gradient(fixed, rho);
  };

  const InnerResult at_pi = solve(linalg::maximally_mixed(da));
  if (at_pi.value.support_violation) {
    set_value(r, at_pi.value);
    r.exactness = Exactness::closed_form;
    r.optimizer_state = linalg::maximally_mixed(da);
    return r;
  }

  MaximizeOptions options;
  options.concave = kind == DivergenceKind::relative && is_randomizing(m);
  options.route = "adversarial_sup_inf";
  if (!options.concave) options.extra_starts.push_back(top_choi_marginal(n));
  // The max kind is not smooth in rho; its starts (including the top Choi
  // eigenvector marginal) are evaluated without ascent.
  options.max_iter = kind == DivergenceKind::max ? 0 : std::min(policy.max_iter, kAdversarialMaxOuter);
  NumericPolicy outer = policy;
  outer.opt_tol = std::max(policy.opt_tol, kAdversarialOuterTol);
  const OptimizationReport rep = density_maximize(f, g, da, outer, options);
  r.value = rep.value;
  r.iterations = rep.iterations + inner_iterations;
  r.optimizer_state = rep.optimizer_state;
  r.certificate = options.concave ? rep.fw_gap : rep.restart_spread;
  r.exactness = Exactness::heuristic_bound;
  attach_cross_check(r, n, m, policy);
  return r;
}

ChoiEntropySuite choi_entropy_suite(const KrausChannel& channel, double alpha,
                                    const NumericPolicy& policy) {
  require_channel(channel, "choi_entropy_suite");
  if (!(alpha >= 0.5) || alpha == 1.0 || std::isinf(alpha)) {
    std::ostringstream os;
    os << "choi_entropy_suite: alpha must lie in [1/2, 1) or (1, inf), got " << alpha;
    throw DomainError(os.str());
  }
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const std::vector<int> dims{da, db};
  const Matrix phi = kraus_to_choi(channel).normalized();
  ChoiEntropySuite s;
  s.alpha = alpha;
  s.von_neumann = conditional_entropy(phi, dims, 0);
  s.sandwiched = conditional_renyi_fixed(phi, dims, alpha, 0, RenyiFlavor::sandwiched);
  s.petz = conditional_renyi_fixed(phi, dims, alpha, 0, RenyiFlavor::petz);
  s.petz_adv = petz_conditional_optimized(phi, dims, alpha, 0);
  const InnerResult inner = minimize_divergence(phi, tensor_identity_map(da, db),
                                                DivergenceKind::sandwiched_renyi, alpha, policy,
                                                std::min(policy.max_iter, 1000));
  s.sandwiched_adv = -inner.value.value;
  return s;
}

}  // namespace chanent
