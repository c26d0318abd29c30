#include "chanent/bosonic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chanent/errors.hpp"

namespace chanent::bosonic {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double clamped(double x) { return x < 0.0 && x > -1e-9 ? 0.0 : x; }

double checked(double v) {
  if (!std::isfinite(v)) throw NumericalError("bosonic: overflow in the photon-number formula");
  return v;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::thermal: return "thermal";
    case Family::amplifier: return "amplifier";
    case Family::additive_noise: return "additive_noise";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "thermal") return Family::thermal;
  if (name == "amplifier") return Family::amplifier;
  if (name == "additive_noise" || name == "additive-noise" || name == "additive") {
    return Family::additive_noise;
  }
  throw ValidationError("unknown bosonic family '" + name + "' (expected thermal, amplifier or additive_noise)");
}

void Params::validate() const {
  auto fail = [](const std::string& m) { throw ValidationError("bosonic: " + m); };
  if (!(nb >= 0.0) || !std::isfinite(nb)) fail("N_B must be a finite value >= 0");
  if (ns && (!(*ns >= 0.0) || !std::isfinite(*ns))) fail("N_S must be a finite value >= 0");
  switch (family) {
    case Family::thermal:
      if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0, 1)");
      break;
    case Family::amplifier:
      if (!(gain > 1.0) || !std::isfinite(gain)) fail("G must exceed 1");
      break;
    case Family::additive_noise:
      if (!(xi >= 0.0) || !std::isfinite(xi)) fail("xi must be a finite value >= 0");
      break;
  }
}

double g2(double x) {
  if (!(x >= 0.0)) {
    std::ostringstream os;
    os << "g2: argument must be >= 0, got " << x;
    throw DomainError(os.str());
  }
  if (x == 0.0) return 0.0;
  return std::log2(x + 1.0) + x * std::log1p(1.0 / x) / kLn2;
}

double constrained_entropy(const Params& p) {
  p.validate();
  if (!p.ns) throw ValidationError("bosonic: constrained entropy needs N_S");
  const double ns = *p.ns;
  const double nb = p.nb;
  switch (p.family) {
    case Family::thermal: {
      const double eta = p.eta;
      const double b = (eta + 1.0) * ns + (1.0 - eta) * nb + 1.0;
      const double d1 = checked(std::sqrt(clamped(b * b - 4.0 * eta * ns * (ns + 1.0))));
      const double c = checked((1.0 - eta) * (ns - nb));
      return g2(clamped((d1 + c - 1.0) / 2.0)) + g2(clamped((d1 - c - 1.0) / 2.0)) - g2(ns);
    }
    case Family::amplifier: {
      const double g = p.gain;
      const double b = (g + 1.0) * ns + (g - 1.0) * (nb + 1.0) + 1.0;
      const double d2 = checked(std::sqrt(clamped(b * b - 4.0 * g * ns * (ns + 1.0))));
      const double c = checked((g - 1.0) * (ns + nb + 1.0));
      return g2(clamped((d2 + c - 1.0) / 2.0)) + g2(clamped((d2 - c - 1.0) / 2.0)) - g2(ns);
    }
    case Family::additive_noise: {
      const double xi = p.xi;
      const double d3 = checked(std::sqrt((xi + 1.0) * (xi + 1.0) + 4.0 * xi * ns));
      return g2(clamped((d3 - (xi + 1.0)) / 2.0)) + g2(clamped((d3 + xi - 1.0) / 2.0)) - g2(ns);
    }
  }
  throw ValidationError("bosonic: unknown family");
}

double unconstrained_entropy(const Params& p) {
  p.validate();
  switch (p.family) {
    case Family::thermal: return std::log2(1.0 - p.eta) + g2(p.nb);
    case Family::amplifier: return std::log2(p.gain - 1.0) + g2(p.nb);
    case Family::additive_noise:
      if (p.xi == 0.0) return -std::numeric_limits<double>::infinity();
      return std::log2(p.xi) + 1.0 / kLn2;
  }
  throw ValidationError("bosonic: unknown family");
}

}  // namespace chanent::bosonic
