#pragma once

#include <optional>
#include <string>

namespace chanent::bosonic {

enum class Family { thermal, amplifier, additive_noise };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

struct Params {
  Family family = Family::thermal;
  double eta = 0.5;  // thermal transmissivity in (0, 1)
  double gain = 2.0; // amplifier gain > 1
  double xi = 0.0;   // additive noise variance >= 0
  double nb = 0.0;   // environment mean photon number >= 0
  std::optional<double> ns;  // input mean photon number constraint

  /// Throws ValidationError on out-of-range values for the family.
  void validate() const;
};

/// (x+1) log2(x+1) - x log2 x, evaluated as log2(x+1) + x log1p(1/x)/ln2.
/// Throws DomainError for x < 0.
double g2(double x);

/// Entropy under the photon-number constraint N_S (requires params.ns).
double constrained_entropy(const Params& params);

/// Unconstrained entropy; -inf for the noiseless additive channel.
double unconstrained_entropy(const Params& params);

}  // namespace chanent::bosonic
