#include "wcv/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace wcv {

Partition::Partition(int n, std::vector<int> sizes)
    : n_(n), sizes_(std::move(sizes)) {
  int total = 0;
  for (int s : sizes_) {
    if (s <= 0) throw validation_error("partition block sizes must be positive");
    total += s;
  }
  if (total != n) throw validation_error("partition sizes do not sum to n");
  block_of_.resize(n);
  int idx = 0;
  for (size_t b = 0; b < sizes_.size(); ++b)
    for (int k = 0; k < sizes_[b]; ++k) block_of_[idx++] = int(b);
}

Partition Partition::full(int n) { return Partition(n, {n}); }

Partition Partition::discrete(int n) {
  return Partition(n, std::vector<int>(n, 1));
}

int Partition::block_of(int i) const {
  if (i < 0 || i >= n_) throw size_error("partition index out of range");
  return block_of_[i];
}

int Partition::block_start(int b) const {
  int s = 0;
  for (int k = 0; k < b; ++k) s += sizes_[k];
  return s;
}

int Partition::dim_levi() const {
  int d = 0;
  for (int s : sizes_) d += s * s;
  return d;
}

int Partition::dim_unipotent() const { return (n_ * n_ - dim_levi()) / 2; }

bool Partition::refines(const Partition& other) const {
  if (n_ != other.n_) return false;
  for (int i = 0; i + 1 < n_; ++i)
    if (other.block_of_[i] != other.block_of_[i + 1] &&
        block_of_[i] == block_of_[i + 1])
      return false;
  return true;
}

bool Partition::is_block_diagonal(const Matrix& m) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (!same_block(i, j) && !m.at(i, j).is_zero()) return false;
  return true;
}

bool Partition::is_strict_upper(const Matrix& m) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] >= block_of_[j] && !m.at(i, j).is_zero()) return false;
  return true;
}

bool Partition::is_strict_lower(const Matrix& m) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] <= block_of_[j] && !m.at(i, j).is_zero()) return false;
  return true;
}

bool Partition::is_lower_parabolic(const Matrix& m) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] < block_of_[j] && !m.at(i, j).is_zero()) return false;
  return true;
}

bool Partition::is_unipotent_upper(const Matrix& m) const {
  return is_strict_upper(m - Matrix::identity(n_, m.mode()));
}

bool Partition::is_unipotent_lower(const Matrix& m) const {
  return is_strict_lower(m - Matrix::identity(n_, m.mode()));
}

Matrix Partition::block_diagonal_part(const Matrix& m) const {
  Matrix r(n_, n_, m.mode());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (same_block(i, j)) r.at(i, j) = m.at(i, j);
  return r;
}

Matrix Partition::strict_lower_part(const Matrix& m) const {
  Matrix r(n_, n_, m.mode());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] > block_of_[j]) r.at(i, j) = m.at(i, j);
  return r;
}

Matrix Partition::strict_upper_part(const Matrix& m) const {
  Matrix r(n_, n_, m.mode());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] < block_of_[j]) r.at(i, j) = m.at(i, j);
  return r;
}

std::vector<std::pair<int, int>> Partition::levi_positions() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (same_block(i, j)) v.emplace_back(i, j);
  return v;
}

std::vector<std::pair<int, int>> Partition::strict_upper_positions() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] < block_of_[j]) v.emplace_back(i, j);
  return v;
}

std::vector<std::pair<int, int>> Partition::strict_lower_positions() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] > block_of_[j]) v.emplace_back(i, j);
  return v;
}

std::vector<std::pair<int, int>> Partition::lower_parabolic_positions() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (block_of_[i] >= block_of_[j]) v.emplace_back(i, j);
  return v;
}

std::string Partition::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t b = 0; b < sizes_.size(); ++b) os << (b ? "," : "") << sizes_[b];
  os << ")";
  return os.str();
}

std::vector<int> normalize_labels(const std::vector<int>& raw) {
  std::map<int, int> seen;
  std::vector<int> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    auto it = seen.find(raw[i]);
    if (it == seen.end()) it = seen.emplace(raw[i], int(seen.size())).first;
    out[i] = it->second;
  }
  return out;
}

bool labels_refine(const std::vector<int>& fine, const std::vector<int>& coarse) {
  if (fine.size() != coarse.size()) return false;
  for (size_t i = 0; i < fine.size(); ++i)
    for (size_t j = i + 1; j < fine.size(); ++j)
      if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
  return true;
}

bool is_label_block_diagonal(const Matrix& m, const std::vector<int>& labels) {
  int n = m.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (labels[i] != labels[j] && !m.at(i, j).is_zero()) return false;
  return true;
}

Matrix label_block_diagonal_part(const Matrix& m, const std::vector<int>& labels) {
  Matrix r(m.rows(), m.cols(), m.mode());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (labels[i] == labels[j]) r.at(i, j) = m.at(i, j);
  return r;
}

int label_levi_dim(const std::vector<int>& labels) {
  int d = 0;
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = 0; j < labels.size(); ++j)
      if (labels[i] == labels[j]) ++d;
  return d;
}

const Partition& LeviChain::pi(int j) const {
  if (j < 1 || j > depth()) throw size_error("chain index out of range");
  return partitions[j - 1];
}

LeviChain LeviChain::trivial(int n, std::vector<Partition> partitions) {
  LeviChain c;
  c.sigma.resize(n);
  std::iota(c.sigma.begin(), c.sigma.end(), 0);
  c.partitions = std::move(partitions);
  c.validate();
  return c;
}

void LeviChain::validate() const {
  int nn = n();
  std::vector<int> seen(nn, 0);
  for (int s : sigma) {
    if (s < 0 || s >= nn || seen[s]++) throw validation_error("sigma is not a permutation");
  }
  if (partitions.empty()) throw validation_error("empty Levi chain");
  for (const auto& p : partitions)
    if (p.n() != nn) throw validation_error("chain partition size mismatch");
  for (size_t j = 0; j + 1 < partitions.size(); ++j)
    if (!partitions[j].refines(partitions[j + 1]))
      throw validation_error("chain partitions must refine upward");
}

}  // namespace wcv
