#include "chanent/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <algorithm>
#include <sstream>

#include "chanent/bosonic.hpp"
#include "chanent/channel.hpp"
#include "chanent/channel_divergence.hpp"
#include "chanent/channel_entropy.hpp"
#include "chanent/errors.hpp"
#include "chanent/random.hpp"
#include "chanent/state_entropy.hpp"
#include "chanent/superchannel.hpp"

namespace chanent::acceptance {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

class Tally {
 public:
  void close(double got, double want, double tol, const std::string& what) {
    const double dev = std::abs(got - want);
    ++checks_;
    if (std::isfinite(dev)) worst_ = std::max(worst_, dev);
    if (!(dev <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << ", expected " << want << " (tol " << tol << ")";
      fail(os.str());
    }
  }

  /// got <= bound
  void at_most(double got, double bound, const std::string& what) {
    ++checks_;
    if (!(got <= bound)) {
      std::ostringstream os;
      os << what << ": " << got << " exceeds " << bound;
      fail(os.str());
    }
  }

  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) fail(what);
  }

  bool passed() const { return failures_ == 0; }

  std::string detail() const {
    std::ostringstream os;
    os << checks_ << " checks";
    if (worst_ > 0.0) os << ", worst deviation " << std::setprecision(2) << std::scientific << worst_;
    if (failures_ > 0) os << "; " << failures_ << " failed, first: " << first_failure_;
    return os.str();
  }

 private:
  void fail(const std::string& message) {
    if (failures_++ == 0) first_failure_ = message;
  }

  int checks_ = 0;
  int failures_ = 0;
  double worst_ = 0.0;
  std::string first_failure_;
};

struct Context {
  NumericPolicy policy;
  std::vector<double> concave_gaps;

  void record(const OptimizationReport& r) {
    if (r.fw_gap) concave_gaps.push_back(*r.fw_gap);
  }

  Rng rng(int id) const { return Rng(derive_seed(policy.seed, 1000 + static_cast<std::uint64_t>(id))); }
};

KrausChannel random_qubit_channel(Rng& rng, int env = 2) { return random_channel(2, 2, env, rng); }

void closed_forms(Context& ctx, Tally& t) {
  auto compare = [&](StandardKind kind, const StandardParams& p, const std::string& label) {
    const OptimizationReport r = channel_entropy(standard_channel(kind, p), ctx.policy);
    ctx.record(r);
    t.close(r.value, closed_form_entropy(kind, p), 1e-5, label);
  };
  for (int d : {2, 3}) {
    for (double p : {0.0, 0.3, 0.5, 1.0}) {
      compare(StandardKind::erasure, {d, 0, p, {}, {}}, "erasure d=" + std::to_string(d) + " p=" + std::to_string(p));
    }
  }
  const std::vector<std::vector<double>> deph2{{1.0, 0.0}, {0.5, 0.5}, {0.8, 0.2}};
  const std::vector<std::vector<double>> deph3{{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.3, 0.2}, {0.9, 0.1, 0.0}};
  for (const auto* set : {&deph2, &deph3}) {
    for (const auto& q : *set) {
      StandardParams p;
      p.d = static_cast<int>(q.size());
      p.probs = q;
      compare(StandardKind::dephasing, p, "dephasing d=" + std::to_string(p.d));
    }
  }
  const double wh_expected[] = {-1.0, 0.0, std::log2(1.5)};
  for (int d : {2, 3, 4}) {
    StandardParams p;
    p.d = d;
    compare(StandardKind::werner_holevo, p, "werner_holevo d=" + std::to_string(d));
    t.close(closed_form_entropy(StandardKind::werner_holevo, p), wh_expected[d - 2], 1e-12,
            "werner_holevo closed form d=" + std::to_string(d));
  }
  for (int d : {2, 3}) {
    for (double p : {0.0, 0.5, 1.0}) {
      compare(StandardKind::depolarizing, {d, 0, p, {}, {}},
              "depolarizing d=" + std::to_string(d) + " p=" + std::to_string(p));
    }
  }
}

void saturation(Context& ctx, Tally& t) {
  for (int d : {2, 3}) {
    const OptimizationReport id = channel_entropy(identity_channel(d), ctx.policy);
    const OptimizationReport rd = channel_entropy(randomizing_channel(d, d), ctx.policy);
    ctx.record(id);
    ctx.record(rd);
    t.close(id.value, -std::log2(double(d)), 1e-6, "identity d=" + std::to_string(d));
    t.close(rd.value, std::log2(double(d)), 1e-6, "randomizing d=" + std::to_string(d));
  }
}

void reduction_to_states(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(3);
  for (int k = 0; k < 10; ++k) {
    const int db = 2 + k % 2;
    const Matrix sigma = rng.density_matrix(db);
    const KrausChannel n = replacer_channel(2, sigma);
    const std::string tag = "sample " + std::to_string(k);
    const OptimizationReport h = channel_entropy(n, ctx.policy);
    ctx.record(h);
    t.close(h.value, von_neumann_entropy(sigma), 1e-5, "H, " + tag);
    for (double a : {0.5, 2.0, 10.0}) {
      t.close(renyi_channel_entropy(n, a, ctx.policy).value, renyi_entropy(sigma, a), 1e-5,
              "H_alpha alpha=" + std::to_string(a) + ", " + tag);
    }
    t.close(min_entropy_channel(n), min_entropy(sigma), 1e-5, "H_min, " + tag);
  }
}

void additivity(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(4);
  for (int k = 0; k < 5; ++k) {
    const KrausChannel n = random_qubit_channel(rng);
    const KrausChannel m = random_qubit_channel(rng);
    const OptimizationReport hn = channel_entropy(n, ctx.policy);
    const OptimizationReport hm = channel_entropy(m, ctx.policy);
    const OptimizationReport hnm = channel_entropy(tensor_channels(n, m), ctx.policy);
    ctx.record(hn);
    ctx.record(hm);
    ctx.record(hnm);
    const std::string tag = "pair " + std::to_string(k);
    t.close(hnm.value, hn.value + hm.value, 2e-4, "H additivity, " + tag);
    t.close(min_entropy_channel(tensor_channels(n, m)), min_entropy_channel(n) + min_entropy_channel(m),
            1e-10, "H_min additivity, " + tag);
  }
}

void renyi_bridge(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(5);
  const std::vector<double> alphas{1.1, 2.0, 5.0, 20.0, 100.0};
  for (int k = 0; k < 5; ++k) {
    const KrausChannel n = random_qubit_channel(rng);
    const std::string tag = "channel " + std::to_string(k);
    double previous = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double a : alphas) {
      const OptimizationReport r = renyi_channel_entropy(n, a, ctx.policy);
      t.at_most(r.value, previous + 1e-6, "H_alpha non-increasing at alpha=" + std::to_string(a) + ", " + tag);
      if (r.cross_check) t.close(*r.cross_check, r.value, 1e-6, "route agreement alpha=" + std::to_string(a) + ", " + tag);
      previous = r.value;
      last = r.value;
    }
    t.close(last, min_entropy_channel(n), 2e-2, "H_100 vs H_min, " + tag);
  }
}

void cb_norm(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(6);
  for (int k = 0; k < 5; ++k) {
    const KrausChannel n = random_qubit_channel(rng);
    const double h = renyi_channel_entropy(n, 2.0, ctx.policy).value;
    const OptimizationReport cb = cb_one_to_alpha_norm(n, 2.0, ctx.policy);
    t.close(renyi_from_cb_norm(cb.value, 2.0), h, 1e-5, "CB relation, channel " + std::to_string(k));
  }
}

void collapses(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(7);
  const KrausChannel r = randomizing_channel(2, 2);
  for (int k = 0; k < 5; ++k) {
    const KrausChannel n = random_qubit_channel(rng);
    const std::string tag = "channel " + std::to_string(k);
    const ChannelDivergenceResult gen = generalized_channel_divergence(n, r, DivergenceKind::relative, 0.0, ctx.policy);
    const ChannelDivergenceResult adv = adversarial_divergence(n, r, DivergenceKind::relative, 0.0, ctx.policy);
    t.close(adv.value, gen.value, 1e-4, "D_adv vs D, " + tag);
    const double closed = 1.0 - min_entropy_channel(n);
    const ChannelDivergenceResult adv_max = adversarial_divergence(n, r, DivergenceKind::max, 0.0, ctx.policy);
    const ChannelDivergenceResult choi_max = choi_divergence(n, r, DivergenceKind::max);
    t.close(adv_max.value, closed, 1e-6, "D_max_adv vs log|B| - H_min, " + tag);
    t.close(choi_max.value, closed, 1e-6, "D_max_Choi vs log|B| - H_min, " + tag);
  }
}

void superchannels(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(8);
  const KrausChannel n = random_qubit_channel(rng);
  const double h = channel_entropy(n, ctx.policy).value;
  SuperchannelParams params;
  for (int k = 0; k < 20; ++k) {
    const Superchannel theta =
        make_superchannel(SuperchannelRecipe::random_unitary, params, derive_seed(ctx.policy.seed, 800 + k));
    const OptimizationReport ht = channel_entropy(superchannel_apply(theta, n), ctx.policy);
    ctx.record(ht);
    t.at_most(h, ht.value + 1e-5, "H(theta(N)) >= H(N), superchannel " + std::to_string(k));
  }
  const KrausChannel m = random_qubit_channel(rng, 4);
  const double d = choi_divergence(n, m, DivergenceKind::relative).value;
  for (int k = 0; k < 20; ++k) {
    const Superchannel theta =
        make_superchannel(SuperchannelRecipe::unital_pre_mix, params, derive_seed(ctx.policy.seed, 900 + k));
    const double dt =
        choi_divergence(superchannel_apply(theta, n), superchannel_apply(theta, m), DivergenceKind::relative).value;
    t.at_most(dt, d + 1e-6, "D_Choi(theta(N)||theta(M)) <= D_Choi(N||M), superchannel " + std::to_string(k));
  }
}

void bosonic_formulas(Context&, Tally& t) {
  using namespace bosonic;
  Params thermal{Family::thermal, 0.5, 2.0, 0.0, 0.0, std::nullopt};
  Params amp{Family::amplifier, 0.5, 2.0, 0.0, 0.0, std::nullopt};
  Params add{Family::additive_noise, 0.5, 2.0, 1.0, 0.0, std::nullopt};
  t.close(unconstrained_entropy(thermal), -1.0, 1e-9, "thermal eta=0.5 N_B=0");
  t.close(unconstrained_entropy(amp), 0.0, 1e-9, "amplifier G=2 N_B=0");
  t.close(unconstrained_entropy(add), 1.0 / kLn2, 1e-9, "additive xi=1");
  const std::vector<Params> limits{
      {Family::thermal, 0.5, 2.0, 0.0, 0.0, 1e6},   {Family::thermal, 0.8, 2.0, 0.0, 1.5, 1e6},
      {Family::amplifier, 0.5, 2.0, 0.0, 0.0, 1e6}, {Family::amplifier, 0.5, 3.5, 0.0, 0.7, 1e6},
      {Family::additive_noise, 0.5, 2.0, 1.0, 0.0, 1e6}, {Family::additive_noise, 0.5, 2.0, 0.25, 0.0, 1e6}};
  for (const Params& p : limits) {
    t.close(constrained_entropy(p), unconstrained_entropy(p), 1e-3, "N_S = 1e6 limit, " + to_string(p.family));
  }
}

/// Minimum over a Bloch-ball grid of Dbar_alpha(rho_AB || I (x) sigma_B),
/// refined by successively finer grids around the incumbent.
double sibson_grid_min(const Matrix& rho, double alpha) {
  const Matrix x = Matrix::Identity(2, 2);
  const Matrix sx = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix sy = (Matrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  const Matrix sz = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  auto value = [&](double a, double b, double c) {
    const double r = std::sqrt(a * a + b * b + c * c);
    if (r >= 0.999999) return std::numeric_limits<double>::infinity();
    const Matrix sigma = 0.5 * (x + a * sx + b * sy + c * sz);
    return petz_renyi(rho, linalg::kron(x, sigma), alpha).value;
  };
  double best = std::numeric_limits<double>::infinity();
  double ba = 0, bb = 0, bc = 0;
  const int n = 21;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n + 1; ++k) {
        const double a = -1.0 + 2.0 * i / (n - 1), b = -1.0 + 2.0 * j / (n - 1), c = -1.0 + 2.0 * k / n;
        const double v = value(a, b, c);
        if (v < best) best = v, ba = a, bb = b, bc = c;
      }
    }
  }
  double h = 0.1;
  for (int round = 0; round < 6; ++round) {
    const double ca = ba, cb = bb, cc = bc;
    for (int i = -5; i <= 5; ++i) {
      for (int j = -5; j <= 5; ++j) {
        for (int k = -5; k <= 5; ++k) {
          const double a = ca + h * i / 5, b = cb + h * j / 5, c = cc + h * k / 5;
          const double v = value(a, b, c);
          if (v < best) best = v, ba = a, bb = b, bc = c;
        }
      }
    }
    h /= 4.0;
  }
  return best;
}

void property_suites(Context& ctx, Tally& t) {
  Rng rng = ctx.rng(10);
  for (int k = 0; k < 10; ++k) {
    const KrausChannel n = random_channel(2, 3, 2, rng);
    const KrausChannel comp = complementary(canonical_form(n));
    const Matrix rho = rng.density_matrix(2);
    const Matrix analytic = dual_conditional_gradient(comp, rho);
    const Matrix fd = finite_difference_gradient(
        [&comp](const Matrix& s) { return dual_conditional_objective(comp, s); }, rho);
    t.close(linalg::max_abs(analytic - fd), 0.0, 1e-5, "entropy gradient vs finite differences, state " + std::to_string(k));
    const Matrix sa = sibson_gradient(comp, rho, 0.5);
    const Matrix sf = finite_difference_gradient(
        [&comp](const Matrix& s) { return sibson_objective(comp, s, 0.5); }, rho);
    t.close(linalg::max_abs(sa - sf), 0.0, 1e-5, "Sibson gradient vs finite differences, state " + std::to_string(k));
  }
  for (int k = 0; k < 3; ++k) {
    const Matrix rho = rng.density_matrix(4);
    const double closed = petz_conditional_optimized(rho, {2, 2}, 2.0, 1);
    t.close(closed, -sibson_grid_min(rho, 2.0), 2e-4, "Sibson closed form vs grid, state " + std::to_string(k));
  }
  double worst_dp = 0.0;
  for (int k = 0; k < 10; ++k) {
    const int d = 2 + k % 2;
    const Matrix rho = rng.density_matrix(d);
    const Matrix sigma = rng.density_matrix(d);
    const KrausChannel n = random_channel(d, 2 + (k / 2) % 2, 2, rng);
    const Matrix nr = n.apply(rho);
    const Matrix ns = n.apply(sigma);
    auto dp = [&](double before, double after, const std::string& what) {
      worst_dp = std::max(worst_dp, after - before);
      t.at_most(after, before + 1e-9, what);
    };
    dp(relative_entropy(rho, sigma).value, relative_entropy(nr, ns).value, "relative entropy data processing");
    dp(max_relative_entropy(rho, sigma).value, max_relative_entropy(nr, ns).value, "D_max data processing");
    for (double a : {0.5, 0.75, 1.5, 2.0, 5.0}) {
      dp(sandwiched_renyi(rho, sigma, a).value, sandwiched_renyi(nr, ns, a).value,
         "sandwiched data processing alpha=" + std::to_string(a));
    }
    for (double a : {0.25, 0.5, 1.5, 2.0}) {
      dp(petz_renyi(rho, sigma, a).value, petz_renyi(nr, ns, a).value, "Petz data processing alpha=" + std::to_string(a));
    }
  }
  if (ctx.concave_gaps.empty()) {
    Rng extra = ctx.rng(11);
    for (int k = 0; k < 5; ++k) ctx.record(channel_entropy(random_channel(2, 2, 2, extra), ctx.policy));
  }
  for (std::size_t i = 0; i < ctx.concave_gaps.size(); ++i) {
    t.at_most(ctx.concave_gaps[i], ctx.policy.opt_tol, "Frank-Wolfe gap of concave run " + std::to_string(i));
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Context&, Tally&)> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "Closed-form finite-dimensional entropies", closed_forms},
      {2, "Dimension saturation", saturation},
      {3, "Reduction to states", reduction_to_states},
      {4, "Additivity", additivity},
      {5, "Renyi bridge to the min-entropy", renyi_bridge},
      {6, "CB-norm relation", cb_norm},
      {7, "Divergence collapses", collapses},
      {8, "Superchannel monotonicity", superchannels},
      {9, "Bosonic formulas", bosonic_formulas},
      {10, "Property suites", property_suites},
  };
  return list;
}

}  // namespace

std::vector<CriterionResult> run(const NumericPolicy& policy, const std::vector<int>& only) {
  policy.validate();
  for (int id : only) {
    if (id < 1 || id > kCriterionCount) {
      throw ValidationError("acceptance: criterion " + std::to_string(id) + " does not exist (1-" +
                            std::to_string(kCriterionCount) + ")");
    }
  }
  Context ctx;
  ctx.policy = policy;
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(ctx, t);
      r.passed = t.passed();
      r.detail = t.detail();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format(const CriterionResult& r, bool with_time) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.title << "  (" << r.detail;
  if (with_time) os << "; " << std::fixed << std::setprecision(2) << r.seconds << "s";
  os << ")";
  return os.str();
}

}  // namespace chanent::acceptance
