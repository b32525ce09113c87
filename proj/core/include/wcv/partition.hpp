#pragma once

#include <utility>
#include <vector>

#include "wcv/matrix.hpp"

namespace wcv {

// Ordered partition of {0..n-1} into contiguous interval blocks, given by
// block sizes. Encodes a standard Levi subgroup H (block diagonal), its
// parabolics P+/P- and unipotent radicals U+/U-.
class Partition {
 public:
  Partition() : n_(0) {}
  Partition(int n, std::vector<int> sizes);
  static Partition full(int n);      // one block {0..n-1}
  static Partition discrete(int n);  // n singleton blocks

  int n() const { return n_; }
  int num_blocks() const { return int(sizes_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  int block_of(int i) const;
  bool same_block(int i, int j) const { return block_of(i) == block_of(j); }
  int block_start(int b) const;

  int dim_levi() const;       // sum of squared block sizes
  int dim_unipotent() const;  // dim U+ = dim U-

  // this refines other: every block of *this lies inside a block of other.
  bool refines(const Partition& other) const;
  bool operator==(const Partition& o) const {
    return n_ == o.n_ && sizes_ == o.sizes_;
  }

  bool is_block_diagonal(const Matrix& m) const;
  bool is_strict_upper(const Matrix& m) const;  // zero outside strictly-upper blocks
  bool is_strict_lower(const Matrix& m) const;
  bool is_lower_parabolic(const Matrix& m) const;  // block diag + strictly lower
  bool is_unipotent_upper(const Matrix& m) const;  // I + strictly upper
  bool is_unipotent_lower(const Matrix& m) const;

  Matrix block_diagonal_part(const Matrix& m) const;
  Matrix strict_lower_part(const Matrix& m) const;
  Matrix strict_upper_part(const Matrix& m) const;

  // Entry positions of the associated subspaces of gl_n.
  std::vector<std::pair<int, int>> levi_positions() const;
  std::vector<std::pair<int, int>> strict_upper_positions() const;
  std::vector<std::pair<int, int>> strict_lower_positions() const;
  std::vector<std::pair<int, int>> lower_parabolic_positions() const;

  std::string str() const;

 private:
  int n_;
  std::vector<int> sizes_;
  std::vector<int> block_of_;
};

// Equality-pattern partition with no interval structure: label per index.
// Used for centralizers of (possibly unsorted) diagonal tuples.
std::vector<int> normalize_labels(const std::vector<int>& raw);
bool labels_refine(const std::vector<int>& fine, const std::vector<int>& coarse);
bool is_label_block_diagonal(const Matrix& m, const std::vector<int>& labels);
Matrix label_block_diagonal_part(const Matrix& m, const std::vector<int>& labels);
int label_levi_dim(const std::vector<int>& labels);

// Chain of Levis H_1 <= H_2 <= ... <= H_r in interval form. sigma maps
// sorted slots to the original indices (sigma[k] = original index of slot
// k); partitions[j] is pi_{j+1}, an interval partition in the sorted
// coordinates, with pi_j refining pi_{j+1}.
struct LeviChain {
  std::vector<int> sigma;
  std::vector<Partition> partitions;

  int n() const { return sigma.empty() ? 0 : int(sigma.size()); }
  int depth() const { return int(partitions.size()); }
  const Partition& pi(int j) const;  // 1-based: pi(1) = finest

  static LeviChain trivial(int n, std::vector<Partition> partitions);
  void validate() const;
};

}  // namespace wcv
