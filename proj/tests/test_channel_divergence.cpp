#include <doctest.h>

#include <cmath>

#include "chanent/channel.hpp"
#include "chanent/channel_divergence.hpp"
#include "chanent/channel_entropy.hpp"
#include "chanent/errors.hpp"
#include "chanent/random.hpp"
#include "chanent/state_entropy.hpp"
#include "chanent/superchannel.hpp"
#include "oracles.hpp"

using namespace chanent;

namespace {

const KrausChannel kR2 = randomizing_channel(2, 2);

}  // namespace

TEST_CASE("divergence of a channel from itself vanishes") {
  NumericPolicy policy;
  Rng rng(91);
  const KrausChannel n = random_channel(2, 2, 4, rng);
  CHECK(std::abs(generalized_channel_divergence(n, n, DivergenceKind::relative, 0.0, policy).value) < 1e-9);
  CHECK(std::abs(choi_divergence(n, n, DivergenceKind::relative).value) < 1e-9);
  CHECK(std::abs(choi_divergence(n, n, DivergenceKind::sandwiched_renyi, 2.0).value) < 1e-9);
  CHECK(std::abs(adversarial_choi_divergence(n, n, DivergenceKind::relative, 0.0, policy).value) < 1e-6);
  CHECK(std::abs(adversarial_divergence(n, n, DivergenceKind::max, 0.0, policy).value) < 1e-6);
}

TEST_CASE("identity against the randomizing channel") {
  NumericPolicy policy;
  const KrausChannel id = identity_channel(2);
  const auto gen = generalized_channel_divergence(id, kR2, DivergenceKind::relative, 0.0, policy);
  CHECK(gen.value == doctest::Approx(2.0).epsilon(1e-8));
  REQUIRE(gen.cross_check.has_value());
  CHECK(*gen.cross_check == doctest::Approx(2.0).epsilon(1e-8));

  const auto gmax = generalized_channel_divergence(id, kR2, DivergenceKind::max, 0.0, policy);
  CHECK(gmax.value == doctest::Approx(2.0));
  CHECK(gmax.exactness == Exactness::closed_form);

  CHECK(choi_divergence(id, kR2, DivergenceKind::relative).value == doctest::Approx(2.0));
  CHECK(adversarial_choi_divergence(id, kR2, DivergenceKind::relative, 0.0, policy).value ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(adversarial_divergence(id, kR2, DivergenceKind::relative, 0.0, policy).value ==
        doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("Choi divergence tags and infinities") {
  Rng rng(92);
  const KrausChannel n = random_channel(2, 2, 2, rng);
  const auto r = choi_divergence(n, kR2, DivergenceKind::max);
  CHECK(r.exactness == Exactness::closed_form);
  CHECK(r.mode == DivergenceMode::choi);
  // A rank-deficient Choi state on the right gives +inf.
  const auto inf = choi_divergence(kR2, identity_channel(2), DivergenceKind::relative);
  CHECK(inf.infinite);
  CHECK(std::isinf(inf.value));
  CHECK_THROWS_AS(choi_divergence(n, randomizing_channel(2, 3), DivergenceKind::relative), ValidationError);
  CHECK_THROWS_AS(choi_divergence(n, kR2, DivergenceKind::sandwiched_renyi, 1.0), DomainError);
}

TEST_CASE("collapses when the second channel is randomizing") {
  NumericPolicy policy;
  Rng rng(93);
  for (int k = 0; k < 3; ++k) {
    const KrausChannel n = random_channel(2, 2, 2, rng);
    const double h = channel_entropy(n, policy).value;
    const auto gen = generalized_channel_divergence(n, kR2, DivergenceKind::relative, 0.0, policy);
    CHECK(gen.value == doctest::Approx(1.0 - h).epsilon(1e-5));
    const auto adv = adversarial_divergence(n, kR2, DivergenceKind::relative, 0.0, policy);
    CHECK(adv.value == doctest::Approx(gen.value).epsilon(1e-4));
    CHECK(adv.exactness == Exactness::heuristic_bound);

    const double choi = choi_divergence(n, kR2, DivergenceKind::relative).value;
    CHECK(adversarial_choi_divergence(n, kR2, DivergenceKind::relative, 0.0, policy).value ==
          doctest::Approx(choi).epsilon(1e-5));

    const double closed = 1.0 - min_entropy_channel(n);
    CHECK(adversarial_divergence(n, kR2, DivergenceKind::max, 0.0, policy).value == doctest::Approx(closed).epsilon(1e-6));
    CHECK(choi_divergence(n, kR2, DivergenceKind::max).value == doctest::Approx(closed).epsilon(1e-6));
  }
}

TEST_CASE("adversarial Choi divergence against a grid over sigma_R (x) pi") {
  NumericPolicy policy;
  Rng rng(94);
  const KrausChannel n = random_channel(2, 2, 2, rng);
  const Matrix omega = kraus_to_choi(n).normalized();
  // R(sigma_RA) = sigma_R (x) pi_B, so the grid covers every feasible point.
  const double grid = oracle::bloch_min(
      [&](const Matrix& s) {
        const Matrix target = oracle::kron(s, linalg::maximally_mixed(2));
        return (omega * (oracle::log2m(omega) - oracle::log2m(target))).trace().real();
      },
      22, 8, 0.999999);
  const double v = adversarial_choi_divergence(n, kR2, DivergenceKind::relative, 0.0, policy).value;
  CHECK(v <= grid + 1e-7);
  CHECK(v >= grid - 1e-5);
}

TEST_CASE("D_max is the same for every full-Schmidt-rank input") {
  Rng rng(95);
  const KrausChannel n = random_channel(2, 2, 2, rng);
  const double reference = choi_divergence(n, kR2, DivergenceKind::max).value;
  for (int k = 0; k < 5; ++k) {
    const Vector psi = rng.pure_state(4);
    const Matrix p = linalg::outer(psi);
    const Matrix left = apply_channel(n, p, 2);
    const Matrix right = apply_channel(kR2, p, 2);
    CHECK(max_relative_entropy(left, right).value == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("general second channel gives a bracketed heuristic bound") {
  NumericPolicy policy;
  Rng rng(96);
  const KrausChannel n = random_channel(2, 2, 2, rng), m = random_channel(2, 2, 4, rng);
  const auto gen = generalized_channel_divergence(n, m, DivergenceKind::relative, 0.0, policy);
  const auto adv_choi = adversarial_choi_divergence(n, m, DivergenceKind::relative, 0.0, policy);
  const auto choi = choi_divergence(n, m, DivergenceKind::relative);
  CHECK(gen.exactness == Exactness::heuristic_bound);
  CHECK(gen.value >= choi.value - 1e-9);
  CHECK(adv_choi.value <= choi.value + 1e-9);
  CHECK(adv_choi.value >= -1e-9);
  const auto renyi = generalized_channel_divergence(n, m, DivergenceKind::sandwiched_renyi, 2.0, policy);
  CHECK(renyi.value >= choi_divergence(n, m, DivergenceKind::sandwiched_renyi, 2.0).value - 1e-9);
  CHECK(renyi.alpha == 2.0);
}

TEST_CASE("Choi divergences are monotone under unital pre-mix superchannels") {
  Rng rng(97);
  const KrausChannel n = random_channel(2, 2, 2, rng), m = random_channel(2, 2, 4, rng);
  struct Case {
    DivergenceKind kind;
    double alpha;
  };
  const Case cases[] = {{DivergenceKind::relative, 0.0},         {DivergenceKind::sandwiched_renyi, 0.5},
                        {DivergenceKind::sandwiched_renyi, 2.0}, {DivergenceKind::petz_renyi, 0.5},
                        {DivergenceKind::petz_renyi, 1.5},       {DivergenceKind::max, 0.0}};
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Superchannel theta = make_superchannel(SuperchannelRecipe::unital_pre_mix, {}, 300 + seed);
    const KrausChannel tn = superchannel_apply(theta, n), tm = superchannel_apply(theta, m);
    for (const Case& c : cases) {
      CHECK(choi_divergence(tn, tm, c.kind, c.alpha).value <= choi_divergence(n, m, c.kind, c.alpha).value + 1e-6);
    }
  }
}

TEST_CASE("choi_entropy_suite examples") {
  NumericPolicy policy;
  const auto id = choi_entropy_suite(identity_channel(2), 2.0, policy);
  CHECK(id.von_neumann == doctest::Approx(-1.0));
  for (double v : {id.sandwiched, id.petz, id.sandwiched_adv, id.petz_adv}) CHECK(v == doctest::Approx(-1.0).epsilon(1e-6));

  Rng rng(98);
  const KrausChannel n = random_channel(2, 2, 2, rng);
  for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
    const auto s = choi_entropy_suite(n, a, policy);
    for (double v : {s.sandwiched, s.petz, s.sandwiched_adv, s.petz_adv}) CHECK(std::abs(v - s.von_neumann) <= 1e-3);
  }
  const auto far = choi_entropy_suite(n, 100.0, policy);
  CHECK(std::abs(far.sandwiched_adv - extended_min_entropy(n, policy).value) <= 2e-2);

  CHECK_THROWS_AS(choi_entropy_suite(n, 1.0, policy), DomainError);
  CHECK_THROWS_AS(choi_entropy_suite(n, 0.3, policy), DomainError);
}

TEST_CASE("choi_entropy_suite on replacer channels and tensor products") {
  NumericPolicy policy;
  Rng rng(99);
  const Matrix sigma = rng.density_matrix(3);
  for (double a : {0.5, 2.0}) {
    const auto s = choi_entropy_suite(replacer_channel(2, sigma), a, policy);
    CHECK(s.von_neumann == doctest::Approx(von_neumann_entropy(sigma)).epsilon(1e-6));
    const double h = renyi_entropy(sigma, a);
    for (double v : {s.sandwiched, s.petz, s.sandwiched_adv, s.petz_adv}) CHECK(v == doctest::Approx(h).epsilon(1e-6));
  }
  const KrausChannel n = random_channel(2, 2, 2, rng), m = random_channel(2, 2, 3, rng);
  const auto sn = choi_entropy_suite(n, 2.0, policy), sm = choi_entropy_suite(m, 2.0, policy);
  const auto sj = choi_entropy_suite(tensor_channels(n, m), 2.0, policy);
  CHECK(sj.von_neumann == doctest::Approx(sn.von_neumann + sm.von_neumann).epsilon(1e-9));
  CHECK(sj.sandwiched == doctest::Approx(sn.sandwiched + sm.sandwiched).epsilon(1e-9));
  CHECK(sj.petz == doctest::Approx(sn.petz + sm.petz).epsilon(1e-9));
  CHECK(sj.petz_adv == doctest::Approx(sn.petz_adv + sm.petz_adv).epsilon(1e-9));
  CHECK(sj.sandwiched_adv == doctest::Approx(sn.sandwiched_adv + sm.sandwiched_adv).epsilon(1e-5));
}

TEST_CASE("Choi entropy functions do not decrease under doubly stochastic candidates") {
  NumericPolicy policy;
  Rng rng(100);
  const KrausChannel n = random_channel(2, 2, 2, rng);
  for (double a : {0.5, 2.0}) {
    const auto before = choi_entropy_suite(n, a, policy);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Superchannel theta = make_superchannel(SuperchannelRecipe::doubly_stochastic, {}, 500 + seed);
      const auto after = choi_entropy_suite(superchannel_apply(theta, n), a, policy);
      CHECK(after.von_neumann >= before.von_neumann - 1e-6);
      CHECK(after.sandwiched >= before.sandwiched - 1e-6);
      CHECK(after.petz >= before.petz - 1e-6);
      CHECK(after.sandwiched_adv >= before.sandwiched_adv - 1e-6);
      CHECK(after.petz_adv >= before.petz_adv - 1e-6);
    }
  }
}

TEST_CASE("mode and exactness names") {
  CHECK(to_string(DivergenceMode::adversarial_choi) == "adversarial_choi");
  CHECK(to_string(Exactness::heuristic_bound) == "heuristic_bound");
  CHECK(is_randomizing(kR2));
  CHECK_FALSE(is_randomizing(identity_channel(2)));
}
