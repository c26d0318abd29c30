#pragma once

#include <optional>
#include <string>

#include "chanent/channel.hpp"
#include "chanent/optimizer.hpp"
#include "chanent/state_entropy.hpp"

namespace chanent {

enum class DivergenceMode { generalized, choi, adversarial_choi, adversarial };
enum class Exactness { closed_form, certified, heuristic_bound };

std::string to_string(DivergenceMode mode);
std::string to_string(Exactness exactness);

struct ChannelDivergenceResult {
  double value = 0.0;  // +inf on support violation
  bool infinite = false;
  DivergenceKind kind = DivergenceKind::relative;
  DivergenceMode mode = DivergenceMode::choi;
  Exactness exactness = Exactness::closed_form;
  double alpha = 0.0;  // 0 for the relative and max kinds
  std::optional<double> certificate;  // restart spread or Frank-Wolfe gap
  int iterations = 0;
  Matrix optimizer_state;
  /// For M = R: log2|B| - H(N) (relative) or log2|B| - H_min(N) (max).
  std::optional<double> cross_check;
};

/// True when M equals the completely randomizing channel within 1e-12.
bool is_randomizing(const KrausChannel& channel);

/// Pure input (I (x) sqrt(rho)) |Gamma> on R (x) A, a smooth purification
/// of rho.
Vector smooth_purification(const Matrix& rho);

/// sup over pure psi_RA of D(N(psi) || M(psi)). The max kind is evaluated
/// at the maximally entangled input in closed form.
ChannelDivergenceResult generalized_channel_divergence(const KrausChannel& n, const KrausChannel& m,
                                                       DivergenceKind kind, double alpha = 0.0,
                                                       const NumericPolicy& policy = {});

/// D(N(Phi) || M(Phi)) on normalized Choi states.
ChannelDivergenceResult choi_divergence(const KrausChannel& n, const KrausChannel& m,
                                        DivergenceKind kind, double alpha = 0.0);

/// inf over states sigma_RA of D(N(Phi) || M(sigma)).
ChannelDivergenceResult adversarial_choi_divergence(const KrausChannel& n, const KrausChannel& m,
                                                    DivergenceKind kind, double alpha = 0.0,
                                                    const NumericPolicy& policy = {});

/// sup over pure psi_RA of inf over sigma_RA of D(N(psi) || M(sigma)).
ChannelDivergenceResult adversarial_divergence(const KrausChannel& n, const KrausChannel& m,
                                               DivergenceKind kind, double alpha = 0.0,
                                               const NumericPolicy& policy = {});

struct ChoiEntropySuite {
  double alpha = 0.0;
  double von_neumann = 0.0;       // H^Phi
  double sandwiched = 0.0;        // H_alpha^Phi
  double petz = 0.0;              // Hbar_alpha^Phi
  double sandwiched_adv = 0.0;    // H_alpha^{adv,Phi}
  double petz_adv = 0.0;          // Hbar_alpha^{adv,Phi}
};

/// The five Choi entropy functions at alpha in [1/2, 1) or (1, inf).
ChoiEntropySuite choi_entropy_suite(const KrausChannel& channel, double alpha,
                                    const NumericPolicy& policy = {});

}  // namespace chanent
