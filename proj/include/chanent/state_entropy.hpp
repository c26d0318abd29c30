#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "chanent/linalg.hpp"

namespace chanent {

inline constexpr double kStateTol = 1e-10;
/// Null-space mass Tr(rho Pi_null) up to this value satisfies the support
/// condition silently.
inline constexpr double kSupportTol = 1e-10;
/// Masses in (kSupportTol, kSupportWarn] still give a finite value but
/// raise DivergenceValue::support_warning; larger masses give +inf.
inline constexpr double kSupportWarn = 1e-6;

/// Validated state on a (possibly composite) system.
class DensityMatrix {
 public:
  /// Throws ValidationError when the matrix is not Hermitian, not PSD within
  /// -kStateTol or not unit trace within kStateTol, or when the dims do not
  /// multiply to the dimension.
  explicit DensityMatrix(Matrix m, std::vector<int> dims = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const std::vector<int>& dims() const { return dims_; }

 private:
  Matrix m_;
  std::vector<int> dims_;
};

/// Throws ValidationError naming `context` unless m is a density matrix.
void require_state(const Matrix& m, const char* context);

struct DivergenceValue {
  double value = 0.0;  // +inf when support_violation
  bool support_violation = false;
  bool support_warning = false;

  bool finite() const { return !support_violation && std::isfinite(value); }
  static DivergenceValue infinite() {
    return {std::numeric_limits<double>::infinity(), true, false};
  }
};

/// Tr(rho Pi), Pi the projector onto the kernel of sigma.
double null_space_mass(const Matrix& rho, const Matrix& sigma);

double von_neumann_entropy(const Matrix& rho);
/// (1/(1-alpha)) log2 Tr rho^alpha; alpha = +inf gives the min-entropy.
double renyi_entropy(const Matrix& rho, double alpha);
double min_entropy(const Matrix& rho);

DivergenceValue relative_entropy(const Matrix& rho, const Matrix& sigma);
DivergenceValue sandwiched_renyi(const Matrix& rho, const Matrix& sigma, double alpha);
DivergenceValue petz_renyi(const Matrix& rho, const Matrix& sigma, double alpha);
DivergenceValue max_relative_entropy(const Matrix& rho, const Matrix& sigma);

/// Tr[(sigma^g rho sigma^g)^alpha] with g = (1-alpha)/(2 alpha).
double sandwiched_quasi(const Matrix& rho, const Matrix& sigma, double alpha);
/// Tr[rho^alpha sigma^(1-alpha)].
double petz_quasi(const Matrix& rho, const Matrix& sigma, double alpha);

enum class DivergenceKind { relative, sandwiched_renyi, petz_renyi, max };

std::string to_string(DivergenceKind kind);
/// Accepts relative, sandwiched_renyi (or renyi, sandwiched), petz_renyi (or
/// petz) and max.
DivergenceKind divergence_kind_from_string(const std::string& name);

/// Dispatches to the state divergence of the given kind; alpha is ignored
/// for the relative and max kinds.
DivergenceValue state_divergence(DivergenceKind kind, const Matrix& rho,
                                 const Matrix& sigma, double alpha);

/// Bipartite system with dims {d0, d1}; `condition_on` is the index (0 or 1)
/// of the conditioning subsystem. H(X|Y) = H(XY) - H(Y).
double conditional_entropy(const Matrix& rho, const std::vector<int>& dims,
                           int condition_on = 1);

enum class RenyiFlavor { sandwiched, petz };

/// -D_alpha(rho_XY || I_X (x) rho_Y); alpha = +inf gives -D_max.
double conditional_renyi_fixed(const Matrix& rho, const std::vector<int>& dims,
                               double alpha, int condition_on = 1,
                               RenyiFlavor flavor = RenyiFlavor::sandwiched);

/// -inf_sigma Dbar_alpha(rho_XY || I_X (x) sigma_Y) in closed form:
/// (alpha/(1-alpha)) log2 Tr[(Tr_X rho^alpha)^(1/alpha)].
double petz_conditional_optimized(const Matrix& rho, const std::vector<int>& dims,
                                  double alpha, int condition_on = 1);

/// I_X (x) rho_Y (or rho_Y (x) I_X when condition_on = 0) in the original
/// subsystem order.
Matrix identity_times_marginal(const Matrix& rho, const std::vector<int>& dims,
                               int condition_on);

}  // namespace chanent
