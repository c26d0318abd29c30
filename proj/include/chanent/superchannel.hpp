#pragma once

#include <cstdint>
#include <vector>

#include "chanent/channel.hpp"

namespace chanent {

enum class SuperchannelKind {
  general,
  random_unitary,
  uniformity_preserving,
  doubly_stochastic_candidate,
};

/// Theta[N] = post ∘ (N (x) id_E) ∘ pre, with pre : C -> A (x) E and
/// post : B (x) E -> D.
class Superchannel {
 public:
  Superchannel(KrausChannel pre, KrausChannel post, int dim_memory,
               SuperchannelKind kind = SuperchannelKind::general);

  const KrausChannel& pre() const { return pre_; }
  const KrausChannel& post() const { return post_; }
  int dim_memory() const { return dim_memory_; }
  SuperchannelKind kind() const { return kind_; }

  int dim_c() const { return pre_.dim_in(); }
  int dim_a() const { return pre_.dim_out() / dim_memory_; }
  int dim_b() const { return post_.dim_in() / dim_memory_; }
  int dim_d() const { return post_.dim_out(); }

 private:
  KrausChannel pre_;
  KrausChannel post_;
  int dim_memory_;
  SuperchannelKind kind_;
};

/// Composite channel C -> D in canonical Kraus form.
KrausChannel superchannel_apply(const Superchannel& theta,
                                const KrausChannel& channel);

/// sum_x p(x) V_x ∘ N ∘ U_x, realized with a classical memory register.
Superchannel random_unitary_superchannel(const std::vector<double>& probs,
                                         const std::vector<Matrix>& pre_unitaries,
                                         const std::vector<Matrix>& post_unitaries);

/// sum_x p(x) Omega_x ∘ (N (x) id_E) ∘ Lambda_x with unital Lambda_x.
/// The memory of the result is E (x) X with X a classical register.
Superchannel unital_pre_mix_superchannel(const std::vector<double>& probs,
                                         const std::vector<KrausChannel>& pre_unital,
                                         const std::vector<KrausChannel>& post,
                                         int dim_memory);

enum class SuperchannelRecipe { random_unitary, unital_pre_mix, pre_post, doubly_stochastic };

struct SuperchannelParams {
  int dim_a = 2;
  int dim_b = 2;
  int dim_d = 0;       // unital_pre_mix output dimension (0: dim_b)
  int terms = 3;       // mixture size
  int dim_memory = 2;  // quantum memory E for unital_pre_mix / doubly_stochastic
};

/// Seeded random superchannels:
///  - random_unitary: Haar unitaries U_x, V_x with random weights;
///  - unital_pre_mix: each Lambda_x a mixture of two Haar unitaries on
///    A (x) E, each Omega_x a random channel B (x) E -> D;
///  - doubly_stochastic: pre = sum_x p(x) U_x . U_x^dagger (x) tau_x with
///    random memory states tau_x, post measures E in a random basis and
///    applies an outcome-dependent unitary, so Tr_E pre(I) = I and
///    post(I (x) rho_E) = Tr(rho_E) I;
///  - pre_post: a single random pre/post pair (general superchannel).
Superchannel make_superchannel(SuperchannelRecipe recipe,
                               const SuperchannelParams& params,
                               std::uint64_t seed);

/// Applies Theta to the randomizing channel and reports the Choi distance
/// to the randomizing channel C -> D.
double uniformity_defect(const Superchannel& theta);

}  // namespace chanent
