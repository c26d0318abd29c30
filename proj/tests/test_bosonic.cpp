#include <doctest.h>

#include <cmath>

#include "chanent/bosonic.hpp"
#include "chanent/errors.hpp"

using namespace chanent;
using namespace chanent::bosonic;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

long double g2_naive(long double x) {
  if (x == 0) return 0;
  return ((x + 1) * std::log(x + 1) - x * std::log(x)) / std::log(2.0L);
}

/// Constrained entropies transcribed term by term, in extended precision.
double constrained_oracle(const Params& p) {
  const long double ns = *p.ns, nb = p.nb;
  switch (p.family) {
    case Family::thermal: {
      const long double eta = p.eta;
      const long double d1 = std::sqrt(std::pow((eta + 1) * ns + (1 - eta) * nb + 1, 2) - 4 * eta * ns * (ns + 1));
      return double(g2_naive((d1 + (1 - eta) * (ns - nb) - 1) / 2) + g2_naive((d1 - (1 - eta) * (ns - nb) - 1) / 2) -
                    g2_naive(ns));
    }
    case Family::amplifier: {
      const long double g = p.gain;
      const long double d2 = std::sqrt(std::pow((g + 1) * ns + (g - 1) * (nb + 1) + 1, 2) - 4 * g * ns * (ns + 1));
      return double(g2_naive((d2 + (g - 1) * (ns + nb + 1) - 1) / 2) +
                    g2_naive((d2 - (g - 1) * (ns + nb + 1) - 1) / 2) - g2_naive(ns));
    }
    case Family::additive_noise: {
      const long double xi = p.xi;
      const long double d3 = std::sqrt((xi + 1) * (xi + 1) + 4 * xi * ns);
      return double(g2_naive((d3 - (xi + 1)) / 2) + g2_naive((d3 + xi - 1) / 2) - g2_naive(ns));
    }
  }
  return 0;
}

Params thermal(double eta, double nb, std::optional<double> ns = std::nullopt) {
  return {Family::thermal, eta, 2.0, 0.0, nb, ns};
}
Params amplifier(double g, double nb, std::optional<double> ns = std::nullopt) {
  return {Family::amplifier, 0.5, g, 0.0, nb, ns};
}
Params additive(double xi, std::optional<double> ns = std::nullopt) {
  return {Family::additive_noise, 0.5, 2.0, xi, 0.0, ns};
}

}  // namespace

TEST_CASE("g2 examples") {
  CHECK(g2(0.0) == 0.0);
  CHECK(g2(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(g2(1e6) - (std::log2(1e6) + 1.0 / kLn2)) <= 1e-5);
  for (double x : {1e-8, 0.3, 4.0, 1e3}) CHECK(g2(x) == doctest::Approx(double(g2_naive(x))).epsilon(1e-13));
  // The asymptotic form stays accurate where the direct formula cancels.
  for (double x : {1e9, 1e12}) CHECK(std::abs(g2(x) - (std::log2(x) + 1.0 / kLn2)) <= 1e-8);
  CHECK_THROWS_AS(g2(-1e-3), DomainError);
}

TEST_CASE("unconstrained examples") {
  CHECK(unconstrained_entropy(thermal(0.5, 0.0)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(unconstrained_entropy(amplifier(2.0, 0.0))) <= 1e-12);
  CHECK(unconstrained_entropy(additive(1.0)) == doctest::Approx(1.0 / kLn2).epsilon(1e-12));
  const double v = unconstrained_entropy(additive(0.0));
  CHECK(std::isinf(v));
  CHECK(v < 0);
  CHECK(unconstrained_entropy(thermal(0.3, 2.0)) == doctest::Approx(std::log2(0.7) + double(g2_naive(2.0))));
  CHECK(unconstrained_entropy(amplifier(3.0, 0.5)) == doctest::Approx(1.0 + double(g2_naive(0.5))));
}

TEST_CASE("constrained examples") {
  CHECK(std::abs(constrained_entropy(thermal(0.5, 0.0, 0.0))) <= 1e-12);
  for (double ns : {0.0, 0.5, 3.0, 100.0})
    CHECK(constrained_entropy(additive(0.0, ns)) == doctest::Approx(-double(g2_naive(ns))).epsilon(1e-12));
  const Params cases[] = {thermal(0.5, 0.0, 1.0), thermal(0.8, 1.5, 3.0), thermal(0.2, 0.3, 0.7),
                          amplifier(2.0, 0.0, 1.0), amplifier(3.5, 0.7, 2.0), additive(0.25, 1.0),
                          additive(2.0, 10.0)};
  for (const Params& p : cases)
    CHECK(constrained_entropy(p) == doctest::Approx(constrained_oracle(p)).epsilon(1e-11));
  CHECK_THROWS_AS(constrained_entropy(thermal(0.5, 0.0)), ValidationError);
}

TEST_CASE("constrained entropies decrease toward the unconstrained limit") {
  const Params bases[] = {thermal(0.5, 0.0), thermal(0.8, 1.5), amplifier(2.0, 0.0), amplifier(3.5, 0.7),
                          additive(1.0), additive(0.25)};
  for (Params p : bases) {
    double prev = INFINITY;
    for (double ns : {0.0, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
      p.ns = ns;
      const double v = constrained_entropy(p);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    CHECK(std::abs(prev - unconstrained_entropy(p)) <= 1e-3);
  }
}

TEST_CASE("additive noise as a limit of thermal channels") {
  for (double xi : {0.5, 1.0, 3.0}) {
    const double eta = 1.0 - 1e-4;
    const double nb = xi / (1.0 - eta);
    CHECK(std::abs(unconstrained_entropy(thermal(eta, nb)) - unconstrained_entropy(additive(xi))) <= 1e-3);
    CHECK(std::abs(constrained_entropy(thermal(eta, nb, 5.0)) - constrained_entropy(additive(xi, 5.0))) <= 1e-3);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(thermal(1.2, 0.0).validate(), ValidationError);
  CHECK_THROWS_AS(thermal(0.0, 0.0).validate(), ValidationError);
  CHECK_THROWS_AS(thermal(0.5, -1.0).validate(), ValidationError);
  CHECK_THROWS_AS(amplifier(0.5, 0.0).validate(), ValidationError);
  CHECK_THROWS_AS(additive(-0.1).validate(), ValidationError);
  CHECK_THROWS_AS(additive(1.0, -2.0).validate(), ValidationError);
  CHECK(family_from_string("thermal") == Family::thermal);
  CHECK(family_from_string(to_string(Family::additive_noise)) == Family::additive_noise);
  CHECK_THROWS_AS(family_from_string("squeezer"), ValidationError);
}
