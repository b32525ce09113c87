#include "wcv/random.hpp"

#include <algorithm>

namespace wcv {

int Rng::uniform(int lo, int hi) {
  return int(std::uniform_int_distribution<long>(lo, hi)(g_));
}

long Rng::small_nonzero(int bound) {
  long v = 0;
  while (v == 0) v = uniform(-bound, bound);
  return v;
}

Scalar Rng::scalar(Mode mode, int bound, bool allow_imag) {
  long re = uniform(-bound, bound);
  long im = allow_imag && coin() ? uniform(-bound, bound) : 0;
  long den = coin() ? 1 : 2;
  if (mode == Mode::exact)
    return Scalar::exact(mpq_class(re, den), mpq_class(im, den));
  return Scalar::floating(double(re) / den, double(im) / den);
}

Scalar Rng::nonzero_scalar(Mode mode, int bound, bool allow_imag) {
  for (;;) {
    Scalar s = scalar(mode, bound, allow_imag);
    if (!s.is_zero()) return s;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step keyed by the stream index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_matrix(Rng& r, int n, Mode mode, int bound) {
  Matrix m(n, n, mode);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = r.scalar(mode, bound);
  return m;
}

Matrix random_invertible(Rng& r, int n, Mode mode) {
  Matrix l = Matrix::identity(n, mode);
  Matrix u = Matrix::identity(n, mode);
  Matrix d(n, n, mode);
  for (int i = 0; i < n; ++i) {
    d.at(i, i) = r.nonzero_scalar(mode, 2);
    for (int j = 0; j < i; ++j)
      if (r.coin()) l.at(i, j) = r.scalar(mode, 1);
    for (int j = i + 1; j < n; ++j)
      if (r.coin()) u.at(i, j) = r.scalar(mode, 1);
  }
  return l * d * u;
}

Matrix random_block_diag_invertible(Rng& r, const Partition& pi, Mode mode) {
  int n = pi.n();
  Matrix m(n, n, mode);
  for (int b = 0; b < pi.num_blocks(); ++b) {
    int s = pi.sizes()[b], off = pi.block_start(b);
    Matrix blk = random_invertible(r, s, mode);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) m.at(off + i, off + j) = blk.at(i, j);
  }
  return m;
}

Matrix random_label_block_diag_invertible(Rng& r, const std::vector<int>& labels,
                                          Mode mode) {
  int n = int(labels.size());
  int nblocks = *std::max_element(labels.begin(), labels.end()) + 1;
  Matrix m(n, n, mode);
  for (int b = 0; b < nblocks; ++b) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (labels[i] == b) idx.push_back(i);
    Matrix blk = random_invertible(r, int(idx.size()), mode);
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j)
        m.at(idx[i], idx[j]) = blk.at(int(i), int(j));
  }
  return m;
}

Matrix random_block_diag_lie(Rng& r, const Partition& pi, Mode mode) {
  int n = pi.n();
  Matrix m(n, n, mode);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (pi.same_block(i, j)) m.at(i, j) = r.scalar(mode, 2);
  return m;
}

Matrix random_label_block_diag_lie(Rng& r, const std::vector<int>& labels,
                                   Mode mode) {
  int n = int(labels.size());
  Matrix m(n, n, mode);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (labels[i] == labels[j]) m.at(i, j) = r.scalar(mode, 2);
  return m;
}

Matrix random_strict_upper(Rng& r, const Partition& pi, Mode mode) {
  Matrix m(pi.n(), pi.n(), mode);
  for (auto [i, j] : pi.strict_upper_positions()) m.at(i, j) = r.scalar(mode, 2);
  return m;
}

Matrix random_strict_lower(Rng& r, const Partition& pi, Mode mode) {
  Matrix m(pi.n(), pi.n(), mode);
  for (auto [i, j] : pi.strict_lower_positions()) m.at(i, j) = r.scalar(mode, 2);
  return m;
}

Matrix random_unipotent_upper(Rng& r, const Partition& pi, Mode mode) {
  return Matrix::identity(pi.n(), mode) + random_strict_upper(r, pi, mode);
}

Matrix random_unipotent_lower(Rng& r, const Partition& pi, Mode mode) {
  return Matrix::identity(pi.n(), mode) + random_strict_lower(r, pi, mode);
}

Matrix random_support(Rng& r, int n, const std::vector<std::pair<int, int>>& pos,
                      Mode mode) {
  Matrix m(n, n, mode);
  for (auto [i, j] : pos) m.at(i, j) = r.scalar(mode, 2);
  return m;
}

Partition random_interval_partition(Rng& r, int n) {
  std::vector<int> sizes;
  int left = n;
  while (left > 0) {
    int s = r.uniform(1, left);
    sizes.push_back(s);
    left -= s;
  }
  return Partition(n, sizes);
}

LeviChain random_levi_chain(Rng& r, int n, int depth) {
  // Build cut sets decreasing along the chain: pi_1 has the most cuts.
  std::vector<std::vector<bool>> cuts(depth, std::vector<bool>(n - 1, false));
  for (int c = 0; c < n - 1; ++c) {
    // Level up to which this cut survives: 0 = absent everywhere.
    int lvl = r.uniform(0, depth);
    for (int j = 0; j < lvl; ++j) cuts[j][c] = true;
  }
  std::vector<Partition> parts;
  for (int j = 0; j < depth; ++j) {
    std::vector<int> sizes;
    int cur = 1;
    for (int c = 0; c < n - 1; ++c) {
      if (cuts[j][c]) {
        sizes.push_back(cur);
        cur = 1;
      } else {
        ++cur;
      }
    }
    sizes.push_back(cur);
    parts.emplace_back(n, sizes);
  }
  return LeviChain::trivial(n, std::move(parts));
}

}  // namespace wcv
