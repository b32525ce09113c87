#include "wcv/irregular.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace wcv {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kAngleMergeTol = 1e-9;
}  // namespace

void IrregularType::validate() const {
  if (n <= 0) throw validation_error("irregular type needs n >= 1");
  for (const auto& c : coeffs) {
    if (c.rows() != n || c.cols() != n)
      throw validation_error("irregular coefficient size mismatch");
    if (c.mode() != mode) throw validation_error("irregular coefficient mode mismatch");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !c.at(i, j).is_zero())
          throw validation_error("irregular coefficients must be diagonal");
  }
  if (!coeffs.empty() && coeffs.back().is_zero())
    throw validation_error("leading irregular coefficient must be nonzero");
}

Scalar IrregularType::coeff(int j, int k) const {
  if (j < 1 || j > depth()) throw size_error("irregular order out of range");
  return coeffs[j - 1].at(k, k);
}

std::vector<Scalar> q_alpha(const IrregularType& q, int k, int l) {
  std::vector<Scalar> out;
  out.reserve(q.depth());
  for (int j = 1; j <= q.depth(); ++j)
    out.push_back(q.coeff(j, k) - q.coeff(j, l));
  return out;
}

int q_alpha_degree(const IrregularType& q, int k, int l) {
  for (int j = q.depth(); j >= 1; --j)
    if (!(q.coeff(j, k) - q.coeff(j, l)).is_zero()) return j;
  return 0;
}

namespace {

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a > kTwoPi - kAngleMergeTol) a = 0.0;
  return a;
}

bool same_angle(double a, double b) {
  double d = std::fabs(a - b);
  return d < kAngleMergeTol || d > kTwoPi - kAngleMergeTol;
}

// e^{-id} for the order-1 ray of leading coefficient c, i.e. -conj(c)/|c|,
// when |c| is rational.
std::optional<Scalar> exact_unit_for(const Scalar& c) {
  if (!c.is_exact()) return std::nullopt;
  const auto& e = c.exact_val();
  mpq_class norm2 = e.re * e.re + e.im * e.im;
  mpq_class root;
  if (!exact_rational_sqrt(norm2, root)) return std::nullopt;
  return Scalar::exact(-e.re / root, e.im / root);
}

}  // namespace

std::vector<SingularDirection> singular_directions(const IrregularType& q) {
  q.validate();
  std::vector<SingularDirection> dirs;
  for (int k = 0; k < q.n; ++k)
    for (int l = 0; l < q.n; ++l) {
      if (k == l) continue;
      int deg = q_alpha_degree(q, k, l);
      if (deg == 0) continue;
      Scalar c = q.coeff(deg, k) - q.coeff(deg, l);
      auto z = c.approx();
      double theta = std::atan2(z.imag(), z.real());
      std::optional<Scalar> unit;
      if (deg == 1) unit = exact_unit_for(c);
      for (int m = 0; m < deg; ++m) {
        double d = normalize_angle((theta - M_PI + kTwoPi * m) / deg);
        bool merged = false;
        for (auto& sd : dirs) {
          if (!same_angle(sd.angle, d)) continue;
          sd.roots.emplace_back(k, l);
          if (!sd.unit && deg == 1 && unit) sd.unit = unit;
          merged = true;
          break;
        }
        if (!merged) {
          SingularDirection sd;
          sd.angle = d;
          if (deg == 1) sd.unit = unit;
          sd.roots.emplace_back(k, l);
          dirs.push_back(std::move(sd));
        }
      }
    }
  std::sort(dirs.begin(), dirs.end(),
            [](const SingularDirection& a, const SingularDirection& b) {
              return a.angle < b.angle;
            });
  for (auto& sd : dirs) std::sort(sd.roots.begin(), sd.roots.end());
  return dirs;
}

std::vector<Matrix> stokes_group_basis(const IrregularType& q, double d,
                                       double tol) {
  auto dirs = singular_directions(q);
  double dn = normalize_angle(d);
  const SingularDirection* found = nullptr;
  for (const auto& sd : dirs) {
    double diff = std::fabs(sd.angle - dn);
    if (diff < tol || diff > kTwoPi - tol) { found = &sd; break; }
  }
  if (!found)
    throw validation_error("direction is not singular for this irregular type");
  // Nilpotency of the Stokes Lie algebra product span(E_kl): products of
  // elementary matrices follow paths in the digraph k -> l, so the span
  // generates a nilpotent algebra exactly when that digraph is acyclic.
  std::vector<std::vector<int>> adj(q.n);
  for (auto [k, l] : found->roots) adj[k].push_back(l);
  std::vector<int> color(q.n, 0);
  std::function<bool(int)> has_cycle = [&](int v) {
    color[v] = 1;
    for (int w : adj[v]) {
      if (color[w] == 1) return true;
      if (color[w] == 0 && has_cycle(w)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (int v = 0; v < q.n; ++v)
    if (color[v] == 0 && has_cycle(v))
      throw error("support digraph of a singular direction has a cycle");
  std::vector<Matrix> basis;
  for (auto [k, l] : found->roots)
    basis.push_back(Matrix::elementary(q.n, q.mode, k, l));
  return basis;
}

std::vector<int> centralizer_labels(const IrregularType& q, int from_j) {
  std::vector<int> labels(q.n, -1);
  int next = 0;
  for (int k = 0; k < q.n; ++k) {
    if (labels[k] >= 0) continue;
    labels[k] = next;
    for (int l = k + 1; l < q.n; ++l) {
      if (labels[l] >= 0) continue;
      bool equal = true;
      for (int j = from_j; j <= q.depth() && equal; ++j)
        equal = (q.coeff(j, k) == q.coeff(j, l));
      if (equal) labels[l] = next;
    }
    ++next;
  }
  return labels;
}

namespace {

// Strict-weak order on scalars used only to sort indices into interval
// position: lexicographic on (re, im), exact comparison per mode.
bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.is_exact()) {
    const auto& x = a.exact_val();
    const auto& y = b.exact_val();
    if (x.re != y.re) return x.re < y.re;
    return x.im < y.im;
  }
  auto x = a.float_val(), y = b.float_val();
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

}  // namespace

LeviChain levi_chain(const IrregularType& q) {
  q.validate();
  LeviChain chain;
  chain.sigma.resize(q.n);
  std::iota(chain.sigma.begin(), chain.sigma.end(), 0);
  if (q.depth() == 0) {
    chain.partitions = {Partition::full(q.n)};
    return chain;
  }
  // Sort by the value tuple (Q_r, Q_{r-1}, .., Q_1) so every suffix
  // pattern becomes an interval partition simultaneously.
  std::stable_sort(chain.sigma.begin(), chain.sigma.end(), [&](int a, int b) {
    for (int j = q.depth(); j >= 1; --j) {
      Scalar x = q.coeff(j, a), y = q.coeff(j, b);
      if (x != y) return scalar_less(x, y);
    }
    return false;
  });
  for (int j = 1; j <= q.depth(); ++j) {
    std::vector<int> sizes;
    int cur = 1;
    for (int k = 1; k < q.n; ++k) {
      bool boundary = false;
      for (int jj = j; jj <= q.depth() && !boundary; ++jj)
        boundary = (q.coeff(jj, chain.sigma[k - 1]) != q.coeff(jj, chain.sigma[k]));
      if (boundary) {
        sizes.push_back(cur);
        cur = 1;
      } else {
        ++cur;
      }
    }
    sizes.push_back(cur);
    chain.partitions.emplace_back(q.n, sizes);
  }
  chain.validate();
  return chain;
}

DimensionAudit dimension_audit(const IrregularType& q) {
  DimensionAudit a;
  for (const auto& sd : singular_directions(q)) a.sum_stokes += int(sd.roots.size());
  for (int k = 0; k < q.n; ++k)
    for (int l = 0; l < q.n; ++l)
      if (k != l) a.sum_degrees += q_alpha_degree(q, k, l);
  if (q.depth() > 0)
    for (const auto& p : levi_chain(q).partitions)
      a.sum_unipotent += 2 * p.dim_unipotent();
  return a;
}

}  // namespace wcv
