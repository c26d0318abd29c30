#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chanent/linalg.hpp"

namespace chanent {

class Rng;

inline constexpr double kTraceTol = 1e-10;

/// Kraus representation of a linear map A -> B. Construction checks shapes
/// only; trace preservation is reported by validate_channel and enforced
/// by require_channel at the entry of every entropy computation.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> kraus, std::string name = {});

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  std::size_t size() const { return kraus_.size(); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& operator[](std::size_t i) const { return kraus_[i]; }
  const std::string& name() const { return name_; }
  KrausChannel renamed(std::string name) const;

  /// sum_i K_i X K_i^dagger for an operator X on A.
  Matrix apply(const Matrix& x) const;
  /// Heisenberg picture: sum_i K_i^dagger Y K_i for an operator Y on B.
  Matrix adjoint_apply(const Matrix& y) const;

 private:
  std::vector<Matrix> kraus_;
  std::string name_;
  int dim_in_ = 0;
  int dim_out_ = 0;
};

struct ChannelValidation {
  int dim_in = 0;
  int dim_out = 0;
  std::size_t kraus_count = 0;
  double tp_defect = 0.0;  // || sum K^dagger K - I ||_inf
  bool completely_positive = true;
  bool valid = false;
};

ChannelValidation validate_channel(const KrausChannel& channel);
/// Throws ValidationError unless the channel is trace preserving.
void require_channel(const KrausChannel& channel, const std::string& context);

/// Unnormalized Choi operator (id_R (x) N)(Gamma_RA), reference system first.
struct ChoiOperator {
  int dim_in = 0;
  int dim_out = 0;
  Matrix gamma_choi;

  /// The Choi state gamma_choi / |A|.
  Matrix normalized() const { return gamma_choi / double(dim_in); }
};

ChoiOperator kraus_to_choi(const KrausChannel& channel);

/// Eigenvalues of the Choi operator below this fraction of the largest one
/// produce no Kraus operator.
inline constexpr double kKrausCutoff = 1e-12;

/// Canonical Kraus set: sqrt(lambda) times each Choi eigenvector, ascending
/// eigenvalue order, first significant entry of every operator made
/// real-positive. Throws ValidationError when the operator is not PSD or
/// not trace preserving.
KrausChannel choi_to_kraus(const ChoiOperator& choi, std::string name = {});

/// Same channel re-expressed in canonical Kraus form (linearly independent
/// operators, count equal to the Choi rank).
KrausChannel canonical_form(const KrausChannel& channel);

struct StinespringIsometry {
  Matrix v;  // (|B| |E|) x |A|, output factor B before environment E
  int dim_in = 0;
  int dim_out = 0;
  int dim_env = 0;

  Matrix apply(const Matrix& rho) const { return v * rho * v.adjoint(); }
};

StinespringIsometry stinespring(const KrausChannel& channel);

/// A -> E channel with [N^c(rho)]_{ij} = Tr(K_i rho K_j^dagger).
KrausChannel complementary(const KrausChannel& channel);

/// Applies the channel, optionally as id_R (x) N on an operator of R (x) A.
Matrix apply_channel(const KrausChannel& channel, const Matrix& rho,
                     std::optional<int> reference_dim = std::nullopt);

/// Channel composition: `after` applied to the output of `before`.
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

/// Kraus set {K_i (x) L_j} of N (x) M acting on A1 A2 -> B1 B2.
KrausChannel tensor_channels(const KrausChannel& first,
                             const KrausChannel& second);

/// Max entrywise distance between the Choi operators of two channels.
double choi_distance(const KrausChannel& a, const KrausChannel& b);

enum class StandardKind {
  identity,
  randomizing,
  replacer,
  erasure,
  dephasing,
  depolarizing,
  werner_holevo,
};

std::string to_string(StandardKind kind);
StandardKind standard_kind_from_string(const std::string& name);

struct StandardParams {
  int d = 2;                  // input dimension
  int d_out = 0;              // output dimension for randomizing (0: d)
  double p = 0.0;             // erasure / depolarizing probability
  std::vector<double> probs;  // dephasing probabilities, size d
  Matrix sigma;               // replacer output state
};

KrausChannel standard_channel(StandardKind kind, const StandardParams& params);

KrausChannel identity_channel(int d);
KrausChannel randomizing_channel(int d_in, int d_out);
KrausChannel replacer_channel(int d_in, const Matrix& sigma);
/// Output dimension d + 1; the erasure flag is the last basis vector.
KrausChannel erasure_channel(int d, double p);
KrausChannel dephasing_channel(const std::vector<double>& probs);
KrausChannel depolarizing_channel(int d, double p);
/// Built from its Choi operator (I - F) / (d - 1), F the swap.
KrausChannel werner_holevo_channel(int d);

/// Random channel from a Haar isometry A -> B (x) E with |E| = env_dim.
KrausChannel random_channel(int d_in, int d_out, int env_dim, Rng& rng);

/// Generalized Pauli operators: X|x> = |x+1 mod d>, Z|x> = w^x |x>.
Matrix shift_operator(int d);
Matrix clock_operator(int d);
/// The d^2 operators X^a Z^b, ordered by (a, b).
std::vector<Matrix> heisenberg_weyl(int d);

struct CovarianceGroup {
  std::vector<Matrix> input;
  std::vector<Matrix> output;
};

/// Input/output unitary pairs under which a standard channel is covariant
/// (Heisenberg-Weyl on the input in every case).
CovarianceGroup standard_covariance_group(StandardKind kind,
                                          const StandardParams& params);

struct CovarianceReport {
  bool covariant = false;
  bool one_design = false;
  double covariance_defect = 0.0;  // max_g Choi distance of N∘U_g vs V_g∘N
  double design_defect = 0.0;      // Choi distance of the twirl from R
};

inline constexpr double kCovarianceTol = 1e-9;

CovarianceReport covariance_check(const KrausChannel& channel,
                                  const std::vector<Matrix>& input_unitaries,
                                  const std::vector<Matrix>& output_unitaries);

}  // namespace chanent
