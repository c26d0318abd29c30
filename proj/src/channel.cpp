#include "chanent/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chanent/errors.hpp"
#include "chanent/random.hpp"

namespace chanent {

using linalg::kron;

KrausChannel::KrausChannel(std::vector<Matrix> kraus, std::string name)
    : kraus_(std::move(kraus)), name_(std::move(name)) {
  if (kraus_.empty()) {
    throw ValidationError("channel '" + name_ + "': empty Kraus sequence");
  }
  dim_out_ = static_cast<int>(kraus_.front().rows());
  dim_in_ = static_cast<int>(kraus_.front().cols());
  if (dim_in_ < 1 || dim_out_ < 1) {
    throw ValidationError("channel '" + name_ + "': zero-sized Kraus operator");
  }
  for (std::size_t i = 1; i < kraus_.size(); ++i) {
    if (kraus_[i].rows() != dim_out_ || kraus_[i].cols() != dim_in_) {
      std::ostringstream os;
      os << "channel '" << name_ << "': Kraus operator " << i << " is "
         << kraus_[i].rows() << "x" << kraus_[i].cols() << ", expected "
         << dim_out_ << "x" << dim_in_;
      throw ValidationError(os.str());
    }
  }
}

KrausChannel KrausChannel::renamed(std::string name) const {
  KrausChannel copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Matrix KrausChannel::apply(const Matrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) {
    throw ValidationError("channel '" + name_ + "': input has dimension " +
                          std::to_string(x.rows()) + ", expected " +
                          std::to_string(dim_in_));
  }
  Matrix out = Matrix::Zero(dim_out_, dim_out_);
  for (const Matrix& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

Matrix KrausChannel::adjoint_apply(const Matrix& y) const {
  if (y.rows() != dim_out_ || y.cols() != dim_out_) {
    throw ValidationError("channel '" + name_ +
                          "': adjoint input has dimension " +
                          std::to_string(y.rows()));
  }
  Matrix out = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) out.noalias() += k.adjoint() * y * k;
  return out;
}

ChannelValidation validate_channel(const KrausChannel& channel) {
  ChannelValidation report;
  report.dim_in = channel.dim_in();
  report.dim_out = channel.dim_out();
  report.kraus_count = channel.size();
  Matrix sum = Matrix::Zero(channel.dim_in(), channel.dim_in());
  for (const Matrix& k : channel.kraus()) sum.noalias() += k.adjoint() * k;
  sum -= Matrix::Identity(channel.dim_in(), channel.dim_in());
  report.tp_defect = linalg::schatten_norm(sum, INFINITY);
  report.valid = report.tp_defect <= kTraceTol;
  return report;
}

void require_channel(const KrausChannel& channel, const std::string& context) {
  const ChannelValidation v = validate_channel(channel);
  if (!v.valid) {
    std::ostringstream os;
    os << context << ": channel '" << channel.name()
       << "' is not trace preserving (defect " << v.tp_defect << ")";
    throw ValidationError(os.str());
  }
}

ChoiOperator kraus_to_choi(const KrausChannel& channel) {
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  Matrix choi = Matrix::Zero(da * db, da * db);
  Vector vec(da * db);
  for (const Matrix& k : channel.kraus()) {
    for (int i = 0; i < da; ++i) vec.segment(i * db, db) = k.col(i);
    choi.noalias() += vec * vec.adjoint();
  }
  return {da, db, linalg::hermitian_part(choi)};
}

KrausChannel choi_to_kraus(const ChoiOperator& choi, std::string name) {
  const int da = choi.dim_in;
  const int db = choi.dim_out;
  if (choi.gamma_choi.rows() != da * db || choi.gamma_choi.cols() != da * db) {
    throw ValidationError("choi_to_kraus: Choi operator has the wrong shape");
  }
  const auto eig = linalg::hermitian_eig(choi.gamma_choi);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (eig.eigenvalues(0) < -1e-10 * std::max(1.0, top)) {
    std::ostringstream os;
    os << "choi_to_kraus: Choi operator is not positive semidefinite "
       << "(min eigenvalue " << eig.eigenvalues(0) << ")";
    throw ValidationError(os.str());
  }
  const Matrix marginal = linalg::partial_trace(choi.gamma_choi, {da, db}, {0});
  const double tp = linalg::max_abs(marginal - Matrix::Identity(da, da));
  if (tp > 1e-9) {
    std::ostringstream os;
    os << "choi_to_kraus: Tr_B of the Choi operator differs from I by " << tp;
    throw ValidationError(os.str());
  }
  std::vector<Matrix> kraus;
  for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
    const double lam = eig.eigenvalues(j);
    if (lam <= kKrausCutoff * top) continue;
    Vector v = eig.eigenvectors.col(j);
    const double vmax = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-8 * vmax) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    Matrix k(db, da);
    for (int i = 0; i < da; ++i) k.col(i) = std::sqrt(lam) * v.segment(i * db, db);
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus), std::move(name));
}

KrausChannel canonical_form(const KrausChannel& channel) {
  return choi_to_kraus(kraus_to_choi(channel), channel.name());
}

StinespringIsometry stinespring(const KrausChannel& channel) {
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const int de = static_cast<int>(channel.size());
  Matrix v = Matrix::Zero(db * de, da);
  for (int i = 0; i < de; ++i) {
    for (int b = 0; b < db; ++b) v.row(b * de + i) = channel[i].row(b);
  }
  return {std::move(v), da, db, de};
}

KrausChannel complementary(const KrausChannel& channel) {
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const int de = static_cast<int>(channel.size());
  std::vector<Matrix> ops;
  ops.reserve(db);
  for (int b = 0; b < db; ++b) {
    Matrix f(de, da);
    for (int i = 0; i < de; ++i) f.row(i) = channel[i].row(b);
    ops.push_back(std::move(f));
  }
  return KrausChannel(std::move(ops), channel.name() + "^c");
}

Matrix apply_channel(const KrausChannel& channel, const Matrix& rho,
                     std::optional<int> reference_dim) {
  if (!reference_dim) return channel.apply(rho);
  const int r = *reference_dim;
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  if (r < 1 || rho.rows() != r * da || rho.cols() != r * da) {
    std::ostringstream os;
    os << "apply_channel: operator has dimension " << rho.rows()
       << ", expected " << r << " x " << da;
    throw ValidationError(os.str());
  }
  // Block (i, j) of the output is sum_k K (rho block (i, j)) K^dagger.
  Matrix out = Matrix::Zero(r * db, r * db);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const Matrix block = rho.block(i * da, j * da, da, da);
      Matrix acc = Matrix::Zero(db, db);
      for (const Matrix& k : channel.kraus()) acc.noalias() += k * block * k.adjoint();
      out.block(i * db, j * db, db, db) = acc;
    }
  }
  return out;
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
  if (after.dim_in() != before.dim_out()) {
    throw ValidationError("compose: output dimension " +
                          std::to_string(before.dim_out()) +
                          " does not match input dimension " +
                          std::to_string(after.dim_in()));
  }
  std::vector<Matrix> ops;
  ops.reserve(after.size() * before.size());
  for (const Matrix& a : after.kraus()) {
    for (const Matrix& b : before.kraus()) ops.push_back(a * b);
  }
  return KrausChannel(std::move(ops), after.name() + "*" + before.name());
}

KrausChannel tensor_channels(const KrausChannel& first,
                             const KrausChannel& second) {
  std::vector<Matrix> ops;
  ops.reserve(first.size() * second.size());
  for (const Matrix& k : first.kraus()) {
    for (const Matrix& l : second.kraus()) ops.push_back(kron(k, l));
  }
  return KrausChannel(std::move(ops), first.name() + "(x)" + second.name());
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw ValidationError("choi_distance: channels have different dimensions");
  }
  return linalg::max_abs(kraus_to_choi(a).gamma_choi - kraus_to_choi(b).gamma_choi);
}

std::string to_string(StandardKind kind) {
  switch (kind) {
    case StandardKind::identity: return "identity";
    case StandardKind::randomizing: return "randomizing";
    case StandardKind::replacer: return "replacer";
    case StandardKind::erasure: return "erasure";
    case StandardKind::dephasing: return "dephasing";
    case StandardKind::depolarizing: return "depolarizing";
    case StandardKind::werner_holevo: return "werner_holevo";
  }
  return "unknown";
}

StandardKind standard_kind_from_string(const std::string& name) {
  for (StandardKind k :
       {StandardKind::identity, StandardKind::randomizing, StandardKind::replacer,
        StandardKind::erasure, StandardKind::dephasing, StandardKind::depolarizing,
        StandardKind::werner_holevo}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown standard channel kind '" + name + "'");
}

namespace {

void check_dim(int d, int min, const char* what) {
  if (d < min) {
    throw ValidationError(std::string(what) + ": dimension must be at least " +
                          std::to_string(min) + ", got " + std::to_string(d));
  }
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << ": probability " << p << " outside [0, 1]";
    throw ValidationError(os.str());
  }
}

Matrix basis_ket_bra(int rows, int cols, int r, int c) {
  Matrix m = Matrix::Zero(rows, cols);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

KrausChannel identity_channel(int d) {
  check_dim(d, 1, "identity");
  return KrausChannel({Matrix::Identity(d, d)}, "identity");
}

KrausChannel randomizing_channel(int d_in, int d_out) {
  check_dim(d_in, 1, "randomizing");
  check_dim(d_out, 1, "randomizing");
  std::vector<Matrix> ops;
  const double w = 1.0 / std::sqrt(double(d_out));
  for (int a = 0; a < d_in; ++a) {
    for (int b = 0; b < d_out; ++b) ops.push_back(w * basis_ket_bra(d_out, d_in, b, a));
  }
  return KrausChannel(std::move(ops), "randomizing");
}

KrausChannel replacer_channel(int d_in, const Matrix& sigma) {
  check_dim(d_in, 1, "replacer");
  const auto eig = linalg::hermitian_eig(sigma);
  const double tr = sigma.trace().real();
  if (eig.eigenvalues(0) < -1e-10 || std::abs(tr - 1.0) > 1e-10) {
    throw ValidationError("replacer: output is not a density matrix");
  }
  const int d_out = static_cast<int>(sigma.rows());
  std::vector<Matrix> ops;
  for (int k = 0; k < d_out; ++k) {
    const double lam = eig.eigenvalues(k);
    if (lam <= kKrausCutoff) continue;
    const Vector v = eig.eigenvectors.col(k);
    for (int a = 0; a < d_in; ++a) {
      Matrix op = Matrix::Zero(d_out, d_in);
      op.col(a) = std::sqrt(lam) * v;
      ops.push_back(std::move(op));
    }
  }
  return KrausChannel(std::move(ops), "replacer");
}

KrausChannel erasure_channel(int d, double p) {
  check_dim(d, 1, "erasure");
  check_probability(p, "erasure");
  std::vector<Matrix> ops;
  if (p < 1.0) {
    Matrix embed = Matrix::Zero(d + 1, d);
    embed.topRows(d) = Matrix::Identity(d, d);
    ops.push_back(std::sqrt(1.0 - p) * embed);
  }
  if (p > 0.0) {
    for (int i = 0; i < d; ++i) ops.push_back(std::sqrt(p) * basis_ket_bra(d + 1, d, d, i));
  }
  return KrausChannel(std::move(ops), "erasure");
}

KrausChannel dephasing_channel(const std::vector<double>& probs) {
  const int d = static_cast<int>(probs.size());
  check_dim(d, 1, "dephasing");
  double sum = 0.0;
  for (double p : probs) {
    check_probability(p, "dephasing");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "dephasing: probabilities sum to " << sum;
    throw ValidationError(os.str());
  }
  const Matrix z = clock_operator(d);
  Matrix zl = Matrix::Identity(d, d);
  std::vector<Matrix> ops;
  for (int l = 0; l < d; ++l) {
    if (probs[l] > 0.0) ops.push_back(std::sqrt(probs[l]) * zl);
    zl = zl * z;
  }
  return KrausChannel(std::move(ops), "dephasing");
}

KrausChannel depolarizing_channel(int d, double p) {
  check_dim(d, 1, "depolarizing");
  check_probability(p, "depolarizing");
  const double d2 = double(d) * d;
  std::vector<Matrix> ops;
  const std::vector<Matrix> hw = heisenberg_weyl(d);
  for (std::size_t k = 0; k < hw.size(); ++k) {
    const double w = (k == 0) ? 1.0 - p + p / d2 : p / d2;
    if (w > 0.0) ops.push_back(std::sqrt(w) * hw[k]);
  }
  return KrausChannel(std::move(ops), "depolarizing");
}

KrausChannel werner_holevo_channel(int d) {
  check_dim(d, 2, "werner_holevo");
  Matrix swap = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  }
  ChoiOperator choi{d, d, (Matrix::Identity(d * d, d * d) - swap) / double(d - 1)};
  return choi_to_kraus(choi, "werner_holevo");
}

KrausChannel standard_channel(StandardKind kind, const StandardParams& params) {
  switch (kind) {
    case StandardKind::identity: return identity_channel(params.d);
    case StandardKind::randomizing:
      return randomizing_channel(params.d, params.d_out > 0 ? params.d_out : params.d);
    case StandardKind::replacer: return replacer_channel(params.d, params.sigma);
    case StandardKind::erasure: return erasure_channel(params.d, params.p);
    case StandardKind::dephasing: return dephasing_channel(params.probs);
    case StandardKind::depolarizing: return depolarizing_channel(params.d, params.p);
    case StandardKind::werner_holevo: return werner_holevo_channel(params.d);
  }
  throw ValidationError("unknown standard channel kind");
}

KrausChannel random_channel(int d_in, int d_out, int env_dim, Rng& rng) {
  const Matrix v = rng.isometry(d_out * env_dim, d_in);
  std::vector<Matrix> ops;
  for (int e = 0; e < env_dim; ++e) {
    Matrix k(d_out, d_in);
    for (int b = 0; b < d_out; ++b) k.row(b) = v.row(b * env_dim + e);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), "random");
}

Matrix shift_operator(int d) {
  Matrix x = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) x((i + 1) % d, i) = 1.0;
  return x;
}

Matrix clock_operator(int d) {
  Matrix z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) z(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * i / d);
  return z;
}

std::vector<Matrix> heisenberg_weyl(int d) {
  const Matrix x = shift_operator(d);
  const Matrix z = clock_operator(d);
  std::vector<Matrix> out;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix zb = Matrix::Identity(d, d);
    for (int b = 0; b < d; ++b) {
      out.push_back(xa * zb);
      zb = zb * z;
    }
    xa = xa * x;
  }
  return out;
}

CovarianceGroup standard_covariance_group(StandardKind kind,
                                          const StandardParams& params) {
  const int d = kind == StandardKind::dephasing ? static_cast<int>(params.probs.size())
                                                : params.d;
  CovarianceGroup group;
  group.input = heisenberg_weyl(d);
  for (const Matrix& u : group.input) {
    switch (kind) {
      case StandardKind::identity:
      case StandardKind::dephasing:
      case StandardKind::depolarizing:
        group.output.push_back(u);
        break;
      case StandardKind::werner_holevo:
        group.output.push_back(u.conjugate());
        break;
      case StandardKind::erasure: {
        Matrix v = Matrix::Identity(d + 1, d + 1);
        v.topLeftCorner(d, d) = u;
        group.output.push_back(v);
        break;
      }
      case StandardKind::randomizing: {
        const int dout = params.d_out > 0 ? params.d_out : d;
        group.output.push_back(Matrix::Identity(dout, dout));
        break;
      }
      case StandardKind::replacer: {
        const int dout = static_cast<int>(params.sigma.rows());
        group.output.push_back(Matrix::Identity(dout, dout));
        break;
      }
    }
  }
  return group;
}

namespace {

void check_unitary(const Matrix& u, const char* which, std::size_t index) {
  if (u.rows() != u.cols() ||
      linalg::max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > 1e-10) {
    std::ostringstream os;
    os << "covariance_check: " << which << " operator " << index << " is not unitary";
    throw ValidationError(os.str());
  }
}

}  // namespace

CovarianceReport covariance_check(const KrausChannel& channel,
                                  const std::vector<Matrix>& input_unitaries,
                                  const std::vector<Matrix>& output_unitaries) {
  if (input_unitaries.size() != output_unitaries.size() || input_unitaries.empty()) {
    throw ValidationError("covariance_check: unitary sequences must be nonempty and of equal length");
  }
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  CovarianceReport report;
  Matrix twirl = Matrix::Zero(da * da, da * da);
  const Matrix gamma = linalg::gamma_operator(da);
  for (std::size_t g = 0; g < input_unitaries.size(); ++g) {
    const Matrix& u = input_unitaries[g];
    const Matrix& v = output_unitaries[g];
    check_unitary(u, "input", g);
    check_unitary(v, "output", g);
    if (u.rows() != da || v.rows() != db) {
      throw ValidationError("covariance_check: unitary dimension mismatch");
    }
    const KrausChannel lhs = compose(channel, KrausChannel({u}));
    const KrausChannel rhs = compose(KrausChannel({v}), channel);
    report.covariance_defect = std::max(report.covariance_defect, choi_distance(lhs, rhs));
    const Matrix iu = kron(Matrix::Identity(da, da), u);
    twirl += iu * gamma * iu.adjoint();
  }
  twirl /= double(input_unitaries.size());
  const Matrix target = kron(Matrix::Identity(da, da), linalg::maximally_mixed(da));
  report.design_defect = linalg::max_abs(twirl - target);
  report.covariant = report.covariance_defect <= kCovarianceTol;
  report.one_design = report.design_defect <= kCovarianceTol;
  return report;
}

}  // namespace chanent
