#pragma once

#include <cstdint>
#include <random>

#include "chanent/linalg.hpp"

namespace chanent {

/// Stream derivation for seeded restarts: splitmix64 applied to
/// base ^ (stream * 0x9E3779B97F4A7C15). Distinct streams of one base seed
/// are decorrelated and the mapping is fixed across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Seeded source of the random matrices used by tests, restarts and
/// superchannel construction.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  cplx complex_normal();

  /// Entries are independent standard complex Gaussians.
  Matrix ginibre(int rows, int cols);

  /// Orthonormal columns from a Householder QR of a Ginibre matrix, with the
  /// phases of R's diagonal moved into Q so the distribution is Haar.
  Matrix isometry(int rows, int cols);
  Matrix unitary(int d) { return isometry(d, d); }

  Vector pure_state(int d);
  /// Ginibre-induced mixed state of the given rank (rank <= 0 means d).
  Matrix density_matrix(int d, int rank = 0);
  /// Probability vector drawn uniformly from the simplex.
  std::vector<double> probability_vector(int n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace chanent
