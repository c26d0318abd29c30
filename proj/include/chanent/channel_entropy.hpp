#pragma once

#include "chanent/channel.hpp"
#include "chanent/optimizer.hpp"

namespace chanent {

/// H(N) = -max_rho H(B|E) for tau = V rho V^dagger. Concave ascent from
/// pi_A with a Frank-Wolfe certificate.
OptimizationReport channel_entropy(const KrausChannel& channel, const NumericPolicy& policy = {});

/// Optimal rate of quantum channel merging; numerically equal to H(N).
OptimizationReport channel_merging_capacity(const KrausChannel& channel,
                                            const NumericPolicy& policy = {});

/// -H(B|E) at pi_A. Throws PreconditionError unless the channel is covariant
/// under the given pairs and the input unitaries form a one-design.
OptimizationReport channel_entropy_covariant(const KrausChannel& channel,
                                             const CovarianceGroup& group,
                                             const NumericPolicy& policy = {});

/// Objective H(rho) - H(N^c(rho)) and its gradient, in bits.
double dual_conditional_objective(const KrausChannel& complement, const Matrix& rho);
Matrix dual_conditional_gradient(const KrausChannel& complement, const Matrix& rho);

double binary_entropy(double p);

/// Closed forms for erasure, dephasing, Werner-Holevo and depolarizing
/// channels. Throws ValidationError for other kinds or bad parameters.
double closed_form_entropy(StandardKind kind, const StandardParams& params);

/// H_alpha(N) for alpha in [1/2, 1) or (1, inf). The reported value comes
/// from -max_rho of the Sibson form of Hbar_beta(B|E), beta = 1/alpha
/// (multi-start). cross_check holds -D_alpha(omega_RB || omega_R (x) I)
/// maximized from the same optimizer over canonical purifications.
OptimizationReport renyi_channel_entropy(const KrausChannel& channel, double alpha,
                                         const NumericPolicy& policy = {});

/// Sibson objective g(rho) = (beta/(1-beta)) log2 Tr[(N^c(rho^beta))^(1/beta)]
/// and its analytic gradient.
double sibson_objective(const KrausChannel& complement, const Matrix& rho, double beta);
Matrix sibson_gradient(const KrausChannel& complement, const Matrix& rho, double beta);

/// D_alpha(omega_RB || omega_R (x) I_B), omega = (id (x) N)(phi_rho) with
/// phi_rho the canonical purification of rho.
double purified_renyi_objective(const KrausChannel& channel, const Matrix& rho, double alpha);

/// -log2 lambda_max of the unnormalized Choi operator.
double min_entropy_channel(const KrausChannel& channel);

/// -min_sigma D_max(Phi^N_RB || sigma_R (x) I_B).
OptimizationReport extended_min_entropy(const KrausChannel& channel,
                                        const NumericPolicy& policy = {});

/// sup_rho || (rho^(1/2a) (x) I) Gamma^N (rho^(1/2a) (x) I) ||_alpha, alpha > 1.
/// value holds the norm itself.
OptimizationReport cb_one_to_alpha_norm(const KrausChannel& channel, double alpha,
                                        const NumericPolicy& policy = {});

/// (alpha/(1-alpha)) log2 of a CB 1->alpha norm.
double renyi_from_cb_norm(double norm, double alpha);

}  // namespace chanent
