#include "wcv/linalg.hpp"

#include <cmath>
#include <functional>

namespace wcv {

namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<int> rref(Matrix& a, const Tolerances& tol) {
  int rows = a.rows(), cols = a.cols();
  double scale = std::max(1.0, a.max_abs());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    if (a.mode() == Mode::exact) {
      for (int i = r; i < rows; ++i)
        if (!a.at(i, c).is_zero()) { piv = i; break; }
    } else {
      double best = 0.0;
      for (int i = r; i < rows; ++i) {
        double v = a.at(i, c).abs2_approx();
        if (v > best) { best = v; piv = i; }
      }
      if (piv >= 0 && std::sqrt(best) <= tol.pivot * scale) piv = -1;
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(a.at(piv, j), a.at(r, j));
    Scalar d = a.at(r, c).inv();
    for (int j = c; j < cols; ++j) a.at(r, j) *= d;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Scalar f = a.at(i, c);
      if (f.is_zero()) continue;
      for (int j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const Matrix& a, const Tolerances& tol) {
  Matrix m = a;
  return int(rref(m, tol).size());
}

std::vector<std::vector<Scalar>> kernel_basis(const Matrix& a,
                                              const Tolerances& tol) {
  Matrix m = a;
  std::vector<int> pivots = rref(m, tol);
  int cols = a.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> x(cols, Scalar::zero(a.mode()));
    x[f] = Scalar::one(a.mode());
    for (size_t r = 0; r < pivots.size(); ++r)
      x[pivots[r]] = -m.at(int(r), f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<std::vector<Scalar>> solve_consistent(const Matrix& a,
                                                    const std::vector<Scalar>& b,
                                                    const Tolerances& tol) {
  if (int(b.size()) != a.rows()) throw size_error("rhs size mismatch in solve");
  Matrix aug(a.rows(), a.cols() + 1, a.mode());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  std::vector<int> pivots = rref(aug, tol);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<Scalar> x(a.cols(), Scalar::zero(a.mode()));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(int(r), a.cols());
  return x;
}

std::vector<Scalar> char_poly(const Matrix& m) {
  int n = m.n();
  Mode mode = m.mode();
  std::vector<Scalar> c(n + 1, Scalar::zero(mode));
  c[n] = Scalar::one(mode);
  Matrix b = Matrix::zeros(n, mode);
  for (int k = 1; k <= n; ++k) {
    Matrix ck = Matrix::scalar_mult_of_identity(n, c[n - k + 1]);
    b = m * (b + ck);
    c[n - k] = (-b.trace()).div_int(k);
  }
  return c;
}

std::vector<Matrix> centralizer_subalgebra(const Matrix& g,
                                           const Tolerances& tol) {
  int n = g.n();
  // gXg^-1 - X = 0 and gX - Xg = 0 have the same kernel; the latter is
  // linear in g's entries and cheaper to assemble.
  Matrix sys(n * n, n * n, g.mode());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int row = i * n + j;
      for (int k = 0; k < n; ++k) {
        sys.at(row, k * n + j) += g.at(i, k);
        sys.at(row, i * n + k) -= g.at(k, j);
      }
    }
  std::vector<Matrix> out;
  for (const auto& v : kernel_basis(sys, tol)) {
    Matrix x(n, n, g.mode());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x.at(i, j) = v[size_t(i) * n + j];
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

bool centralizer_in_pattern(const Matrix& g, const Tolerances& tol,
                            const std::function<bool(const Matrix&)>& member,
                            int levi_dim, bool require_equal) {
  auto basis = centralizer_subalgebra(g, tol);
  for (const auto& x : basis) {
    Matrix y = x;
    if (g.mode() == Mode::floating) {
      // Zero out numerical dust before the pattern test.
      double cut = tol.pivot * std::max(1.0, y.max_abs());
      for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j)
          if (std::sqrt(y.at(i, j).abs2_approx()) <= cut)
            y.at(i, j) = Scalar::zero(Mode::floating);
    }
    if (!member(y)) return false;
  }
  if (require_equal && int(basis.size()) != levi_dim) return false;
  return true;
}

}  // namespace

bool centralizer_equals_levi(const Matrix& g, const Partition& levi,
                             const Tolerances& tol) {
  return centralizer_in_pattern(
      g, tol, [&](const Matrix& x) { return levi.is_block_diagonal(x); },
      levi.dim_levi(), true);
}

bool centralizer_contained_in_levi(const Matrix& g, const Partition& levi,
                                   const Tolerances& tol) {
  return centralizer_in_pattern(
      g, tol, [&](const Matrix& x) { return levi.is_block_diagonal(x); },
      levi.dim_levi(), false);
}

bool centralizer_equals_levi(const Matrix& g, const std::vector<int>& labels,
                             const Tolerances& tol) {
  return centralizer_in_pattern(
      g, tol, [&](const Matrix& x) { return is_label_block_diagonal(x, labels); },
      label_levi_dim(labels), true);
}

bool centralizer_contained_in_levi(const Matrix& g,
                                   const std::vector<int>& labels,
                                   const Tolerances& tol) {
  return centralizer_in_pattern(
      g, tol, [&](const Matrix& x) { return is_label_block_diagonal(x, labels); },
      label_levi_dim(labels), false);
}

}  // namespace wcv
