#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chanent/linalg.hpp"
#include "chanent/state_entropy.hpp"

namespace chanent {

struct NumericPolicy {
  double eigen_cutoff = 1e-14;
  double opt_tol = 1e-8;
  int max_iter = 5000;
  int restarts = 8;
  double step_init = 1.0;
  std::uint64_t seed = 42;

  /// Throws ValidationError unless every field is positive.
  void validate() const;
};

/// Objective on (not necessarily normalized) positive definite operators.
using Objective = std::function<double(const Matrix&)>;
/// Hermitian G with d/dt f(rho + tH)|_0 = Tr[G H] for Hermitian H.
using Gradient = std::function<Matrix(const Matrix&)>;

struct OptimizationReport {
  double value = 0.0;
  Matrix optimizer_state;
  std::optional<double> fw_gap;          // concave runs
  std::optional<double> restart_spread;  // multi-start runs
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::string route;
  std::vector<double> restart_values;
  /// Secondary value from an independent route, when one was computed.
  std::optional<double> cross_check;
};

/// Central differences over an orthonormal Hermitian basis with step
/// min(1e-5, lambda_min(rho)/4).
Matrix finite_difference_gradient(const Objective& f, const Matrix& rho);

/// lambda_max(G) - Tr[rho G].
double frank_wolfe_gap(const Matrix& gradient, const Matrix& rho);

struct AscentResult {
  double value = 0.0;
  Matrix state;
  double fw_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct AscentOptions {
  int max_iter = 5000;
  double tol = 1e-8;
  double step_init = 1.0;
  /// Eigenvalues of the iterate are kept above floor * lambda_max.
  double floor = 1e-12;
};

/// Entropic mirror ascent ln rho' = ln rho + eta ln2 G(rho), renormalized,
/// with eta halved on any decrease and grown after accepted steps. Stops
/// when the Frank-Wolfe gap reaches tol. Throws NumericalError when the
/// objective turns NaN.
AscentResult mirror_ascent(const Objective& f, const Gradient& grad, const Matrix& start,
                           const AscentOptions& options);

struct MaximizeOptions {
  bool concave = true;
  std::vector<Matrix> extra_starts;  // tried after the default starts
  std::string route = "mirror_ascent";
  /// Overrides policy.max_iter; 0 evaluates the starts only.
  std::optional<int> max_iter;
};

/// Maximizes f over density matrices of dimension dim. Concave runs start
/// at pi_d and certify with the Frank-Wolfe gap. Non-concave runs use
/// policy.restarts starts (pi_d, then 0.8 |psi><psi| + 0.2 pi_d with
/// |psi> drawn from derive_seed(policy.seed, k)) and report the spread
/// between the two best restarts. Ties within opt_tol go to the lowest
/// restart index.
OptimizationReport density_maximize(const Objective& f, const std::optional<Gradient>& grad,
                                    int dim, const NumericPolicy& policy,
                                    const MaximizeOptions& options = {});

/// Restart spread accepted as agreement.
double restart_tolerance(const NumericPolicy& policy);

/// Linear CP map L acting on operators of dimension dim_in.
struct LinearMap {
  int dim_in = 0;
  std::function<Matrix(const Matrix&)> apply;
  std::function<Matrix(const Matrix&)> adjoint;
};

/// sigma -> sigma (x) I_k (or I_k (x) sigma with identity_first).
LinearMap tensor_identity_map(int dim, int k, bool identity_first = false);

struct InnerResult {
  DivergenceValue value;
  Matrix sigma;
  int iterations = 0;
  double fw_gap = 0.0;
  bool converged = false;
};

inline constexpr int kInnerMaxIter = 200;

/// min over states sigma of D(x || L(sigma)) by mirror descent from pi.
/// Relative and Renyi kinds use analytic gradients (Renyi kinds through the
/// monotone quasi-entropy); the max kind uses log-sum-exp smoothing of
/// lambda_max with continuation and an exact final evaluation.
InnerResult minimize_divergence(const Matrix& x, const LinearMap& map, DivergenceKind kind,
                                double alpha, const NumericPolicy& policy,
                                int max_iter = kInnerMaxIter);

}  // namespace chanent
