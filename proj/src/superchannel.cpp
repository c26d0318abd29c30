#include "chanent/superchannel.hpp"

#include <cmath>

#include "chanent/errors.hpp"
#include "chanent/random.hpp"

namespace chanent {

using linalg::kron;

namespace {

Matrix basis_ket(int d, int i) {
  Matrix k = Matrix::Zero(d, 1);
  k(i, 0) = 1.0;
  return k;
}

void check_probs(const std::vector<double>& probs, std::size_t n, const char* what) {
  if (probs.size() != n || n == 0) {
    throw ValidationError(std::string(what) + ": probability/term count mismatch");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ValidationError(std::string(what) + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw ValidationError(std::string(what) + ": probabilities do not sum to 1");
  }
}

}  // namespace

Superchannel::Superchannel(KrausChannel pre, KrausChannel post, int dim_memory,
                           SuperchannelKind kind)
    : pre_(std::move(pre)), post_(std::move(post)), dim_memory_(dim_memory), kind_(kind) {
  if (dim_memory_ < 1) throw ValidationError("superchannel: memory dimension must be >= 1");
  if (pre_.dim_out() % dim_memory_ != 0 || post_.dim_in() % dim_memory_ != 0) {
    throw ValidationError("superchannel: pre/post dimensions are not multiples of |E| = " +
                          std::to_string(dim_memory_));
  }
}

KrausChannel superchannel_apply(const Superchannel& theta, const KrausChannel& channel) {
  if (channel.dim_in() != theta.dim_a() || channel.dim_out() != theta.dim_b()) {
    throw ValidationError("superchannel_apply: channel is " + std::to_string(channel.dim_in()) +
                          "->" + std::to_string(channel.dim_out()) + " but the superchannel expects " +
                          std::to_string(theta.dim_a()) + "->" + std::to_string(theta.dim_b()));
  }
  const Matrix id_e = Matrix::Identity(theta.dim_memory(), theta.dim_memory());
  std::vector<Matrix> ops;
  ops.reserve(theta.pre().size() * channel.size() * theta.post().size());
  for (const Matrix& om : theta.post().kraus()) {
    for (const Matrix& k : channel.kraus()) {
      const Matrix mid = om * kron(k, id_e);
      for (const Matrix& lam : theta.pre().kraus()) ops.push_back(mid * lam);
    }
  }
  return canonical_form(KrausChannel(std::move(ops), "theta(" + channel.name() + ")"));
}

Superchannel random_unitary_superchannel(const std::vector<double>& probs,
                                         const std::vector<Matrix>& pre_unitaries,
                                         const std::vector<Matrix>& post_unitaries) {
  const std::size_t n = probs.size();
  check_probs(probs, pre_unitaries.size(), "random_unitary_superchannel");
  if (post_unitaries.size() != n) {
    throw ValidationError("random_unitary_superchannel: unitary count mismatch");
  }
  const int x = static_cast<int>(n);
  std::vector<Matrix> pre, post;
  for (int i = 0; i < x; ++i) {
    pre.push_back(std::sqrt(probs[i]) * kron(pre_unitaries[i], basis_ket(x, i)));
    post.push_back(kron(post_unitaries[i], basis_ket(x, i).adjoint()));
  }
  return Superchannel(KrausChannel(std::move(pre), "pre"), KrausChannel(std::move(post), "post"),
                      x, SuperchannelKind::random_unitary);
}

Superchannel unital_pre_mix_superchannel(const std::vector<double>& probs,
                                         const std::vector<KrausChannel>& pre_unital,
                                         const std::vector<KrausChannel>& post,
                                         int dim_memory) {
  check_probs(probs, pre_unital.size(), "unital_pre_mix_superchannel");
  if (post.size() != probs.size()) {
    throw ValidationError("unital_pre_mix_superchannel: post channel count mismatch");
  }
  const int x = static_cast<int>(probs.size());
  std::vector<Matrix> pre_ops, post_ops;
  for (int i = 0; i < x; ++i) {
    const KrausChannel& lam = pre_unital[i];
    const Matrix unit = lam.apply(Matrix::Identity(lam.dim_in(), lam.dim_in()));
    if (lam.dim_in() != lam.dim_out() ||
        linalg::max_abs(unit - Matrix::Identity(lam.dim_out(), lam.dim_out())) > 1e-9) {
      throw ValidationError("unital_pre_mix_superchannel: pre-processing channel " +
                            std::to_string(i) + " is not unital");
    }
    for (const Matrix& k : lam.kraus()) pre_ops.push_back(std::sqrt(probs[i]) * kron(k, basis_ket(x, i)));
    for (const Matrix& k : post[i].kraus()) post_ops.push_back(kron(k, basis_ket(x, i).adjoint()));
  }
  return Superchannel(KrausChannel(std::move(pre_ops), "pre"), KrausChannel(std::move(post_ops), "post"),
                      dim_memory * x, SuperchannelKind::general);
}

Superchannel make_superchannel(SuperchannelRecipe recipe, const SuperchannelParams& params,
                               std::uint64_t seed) {
  Rng rng(seed);
  const int da = params.dim_a;
  const int db = params.dim_b;
  const int de = params.dim_memory;
  const int terms = params.terms;
  switch (recipe) {
    case SuperchannelRecipe::random_unitary: {
      std::vector<Matrix> us, vs;
      for (int i = 0; i < terms; ++i) {
        us.push_back(rng.unitary(da));
        vs.push_back(rng.unitary(db));
      }
      return random_unitary_superchannel(rng.probability_vector(terms), us, vs);
    }
    case SuperchannelRecipe::unital_pre_mix: {
      const int dd = params.dim_d > 0 ? params.dim_d : db;
      const int dc = da * de;
      std::vector<KrausChannel> pres, posts;
      for (int i = 0; i < terms; ++i) {
        const double w = rng.uniform();
        pres.emplace_back(std::vector<Matrix>{std::sqrt(w) * rng.unitary(dc),
                                              std::sqrt(1.0 - w) * rng.unitary(dc)});
        posts.push_back(random_channel(db * de, dd, 2, rng));
      }
      return unital_pre_mix_superchannel(rng.probability_vector(terms), pres, posts, de);
    }
    case SuperchannelRecipe::doubly_stochastic: {
      const std::vector<double> probs = rng.probability_vector(terms);
      std::vector<Matrix> pre_ops;
      for (int i = 0; i < terms; ++i) {
        const Matrix u = rng.unitary(da);
        const auto tau = linalg::eigh(rng.density_matrix(de));
        for (int k = 0; k < de; ++k) {
          const double mu = std::max(tau.eigenvalues(k), 0.0);
          if (mu <= 0.0) continue;
          pre_ops.push_back(std::sqrt(probs[i] * mu) * kron(u, Matrix(tau.eigenvectors.col(k))));
        }
      }
      const Matrix basis = rng.unitary(de);
      std::vector<Matrix> post_ops;
      for (int k = 0; k < de; ++k) {
        post_ops.push_back(kron(rng.unitary(db), Matrix(basis.col(k).adjoint())));
      }
      return Superchannel(KrausChannel(std::move(pre_ops), "pre"),
                          KrausChannel(std::move(post_ops), "post"), de,
                          SuperchannelKind::doubly_stochastic_candidate);
    }
    case SuperchannelRecipe::pre_post: {
      KrausChannel pre = random_channel(da, da * de, 2, rng);
      KrausChannel post = random_channel(db * de, db, 2, rng);
      return Superchannel(std::move(pre), std::move(post), de, SuperchannelKind::general);
    }
  }
  throw ValidationError("unknown superchannel recipe");
}

double uniformity_defect(const Superchannel& theta) {
  const KrausChannel out =
      superchannel_apply(theta, randomizing_channel(theta.dim_a(), theta.dim_b()));
  return choi_distance(out, randomizing_channel(theta.dim_c(), theta.dim_d()));
}

}  // namespace chanent
