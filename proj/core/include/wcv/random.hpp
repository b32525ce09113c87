#pragma once

#include <cstdint>
#include <random>

#include "wcv/partition.hpp"

namespace wcv {

// Deterministic source for test/CLI point sampling. mt19937_64 output is
// fixed by the standard, so identical seeds reproduce byte-identical
// reports across platforms. Per-trial generators are derived with
// derive_seed so independent trials could run concurrently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  int uniform(int lo, int hi);  // inclusive bounds
  bool coin() { return uniform(0, 1) == 1; }

  // Small nonzero integer in [-bound, bound].
  long small_nonzero(int bound = 2);
  // Gaussian rational with small integer numerators, denominator 1 or 2.
  Scalar scalar(Mode mode, int bound = 2, bool allow_imag = true);
  Scalar nonzero_scalar(Mode mode, int bound = 2, bool allow_imag = true);

 private:
  std::mt19937_64 g_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Matrix random_matrix(Rng& r, int n, Mode mode, int bound = 2);
// LDU product with unit-triangular factors and nonzero diagonal, so
// invertibility holds by construction and entries stay small.
Matrix random_invertible(Rng& r, int n, Mode mode);
Matrix random_block_diag_invertible(Rng& r, const Partition& pi, Mode mode);
Matrix random_label_block_diag_invertible(Rng& r, const std::vector<int>& labels,
                                          Mode mode);
Matrix random_block_diag_lie(Rng& r, const Partition& pi, Mode mode);
Matrix random_label_block_diag_lie(Rng& r, const std::vector<int>& labels,
                                   Mode mode);
Matrix random_strict_upper(Rng& r, const Partition& pi, Mode mode);
Matrix random_strict_lower(Rng& r, const Partition& pi, Mode mode);
Matrix random_unipotent_upper(Rng& r, const Partition& pi, Mode mode);
Matrix random_unipotent_lower(Rng& r, const Partition& pi, Mode mode);
Matrix random_support(Rng& r, int n, const std::vector<std::pair<int, int>>& pos,
                      Mode mode);

Partition random_interval_partition(Rng& r, int n);
// Chain of depth levels with pi_j refining pi_{j+1}.
LeviChain random_levi_chain(Rng& r, int n, int depth);

}  // namespace wcv
