#include "wcv/triangular.hpp"

#include <functional>
#include <string>

#include "wcv/linalg.hpp"
#include "wcv/spaces.hpp"

namespace wcv {

namespace {

// Positions (i, j) with block_of(j) - block_of(i) == level (negated for
// the lower variants).
std::vector<std::pair<int, int>> level_positions(const Partition& pi, int level) {
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < pi.n(); ++i)
    for (int j = 0; j < pi.n(); ++j)
      if (pi.block_of(j) - pi.block_of(i) == level) pos.push_back({i, j});
  return pos;
}

Matrix level_part(const Matrix& m, const std::vector<std::pair<int, int>>& pos) {
  Matrix out(m.n(), m.n(), m.mode());
  for (auto [i, j] : pos) out.at(i, j) = m.at(i, j);
  return out;
}

// Solves op(X) = rhs where op acts within the span of pos and its matrix
// entries are supplied by coeff(row_pos, col_pos). Throws singular_error
// if op is not invertible on that span.
Matrix solve_on_positions(
    const std::vector<std::pair<int, int>>& pos, const Matrix& rhs,
    const std::function<Scalar(std::pair<int, int>, std::pair<int, int>)>& coeff,
    const Tolerances& tol, const char* what) {
  int m = int(pos.size());
  Mode mode = rhs.mode();
  Matrix sys(m, m, mode);
  std::vector<Scalar> b;
  b.reserve(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) sys.at(r, c) = coeff(pos[r], pos[c]);
    b.push_back(rhs.at(pos[r].first, pos[r].second));
  }
  if (rank(sys, tol) != m)
    throw singular_error(std::string(what) +
                         ": centralizer meets the unipotent radical");
  auto sol = solve_consistent(sys, b, tol);
  Matrix x(rhs.n(), rhs.n(), mode);
  for (int r = 0; r < m; ++r) x.at(pos[r].first, pos[r].second) = (*sol)[r];
  return x;
}

void check_residual_zero(const Matrix& diff, double scale, const Tolerances& tol,
                         const char* what) {
  bool bad = diff.mode() == Mode::exact
                 ? !diff.is_zero()
                 : diff.max_abs() > tol.identity * std::max(1.0, scale);
  if (bad) throw validation_error(std::string(what) + ": solve did not converge");
}

}  // namespace

TriangularChart::TriangularChart(Partition p, Matrix base, const Tolerances& tol)
    : pi(std::move(p)), h0(std::move(base), tol) {
  if (!pi.is_block_diagonal(h0.mat()))
    throw validation_error("triangular chart base must be block diagonal");
  if (!centralizer_contained_in_levi(h0.mat(), pi, tol))
    throw validation_error(
        "triangular chart base centralizes outside the Levi");
}

Matrix solve_conj_unip(const Matrix& h, const Matrix& target,
                       const Partition& pi, const Tolerances& tol) {
  if (!pi.is_block_diagonal(h))
    throw validation_error("solve_conj_unip: h must be block diagonal");
  if (!pi.is_unipotent_upper(target))
    throw validation_error("solve_conj_unip: target must be unipotent upper");
  int n = pi.n();
  Mode mode = h.mode();
  Matrix hinv = h.inverse(tol);
  Matrix u = Matrix::identity(n, mode);
  auto phi = [&](const Matrix& uu) {
    return hinv * uu.inverse(tol) * h * uu;
  };
  for (int level = 1; level < pi.num_blocks(); ++level) {
    auto pos = level_positions(pi, level);
    if (pos.empty()) continue;
    Matrix err = phi(u).inverse(tol) * target - Matrix::identity(n, mode);
    Matrix e = level_part(err, pos);
    // (id - Ad_{h^-1}) X = e restricted to this level.
    Matrix x = solve_on_positions(
        pos, e,
        [&](std::pair<int, int> r, std::pair<int, int> c) {
          Scalar v = Scalar::zero(mode);
          if (r == c) v += Scalar::one(mode);
          if (pi.same_block(r.first, c.first) && pi.same_block(r.second, c.second))
            v -= hinv.at(r.first, c.first) * h.at(c.second, r.second);
          return v;
        },
        tol, "solve_conj_unip");
    u = u * (Matrix::identity(n, mode) + x);
  }
  check_residual_zero(phi(u) - target, target.max_abs() + h.max_abs(), tol,
                      "solve_conj_unip");
  return u;
}

Matrix conj_to_block_diagonal_lower(const Matrix& p, const Partition& pi,
                                    const Tolerances& tol) {
  if (!pi.is_lower_parabolic(p))
    throw validation_error(
        "conj_to_block_diagonal_lower: p must be block lower triangular");
  int n = pi.n();
  Mode mode = p.mode();
  Matrix d = pi.block_diagonal_part(p);
  Matrix w = Matrix::identity(n, mode);
  for (int level = 1; level < pi.num_blocks(); ++level) {
    auto pos = level_positions(pi, -level);
    if (pos.empty()) continue;
    Matrix diff = w.inverse(tol) * p * w - d;
    Matrix e = level_part(diff, pos);
    // Clear level by w <- w (I + X): need X d - d X = e on this level.
    Matrix x = solve_on_positions(
        pos, e,
        [&](std::pair<int, int> r, std::pair<int, int> c) {
          Scalar v = Scalar::zero(mode);
          if (r.first == c.first && pi.same_block(r.second, c.second))
            v += d.at(c.second, r.second);
          if (r.second == c.second && pi.same_block(r.first, c.first))
            v -= d.at(r.first, c.first);
          return v;
        },
        tol, "conj_to_block_diagonal_lower");
    w = w * (Matrix::identity(n, mode) + x);
  }
  check_residual_zero(w.inverse(tol) * p * w - d, p.max_abs(), tol,
                      "conj_to_block_diagonal_lower");
  return w;
}

GroupElem tau(const TriangularChart& ch, const GroupElem& k,
              const GroupElem& u, const GroupElem& v) {
  if (!ch.pi.is_block_diagonal(k.mat()))
    throw validation_error("tau: k must lie in the Levi");
  if (!ch.pi.is_unipotent_upper(u.mat()))
    throw validation_error("tau: u must be unipotent upper");
  Matrix h = k.inv() * ch.h0.mat() * k.mat();
  return GroupElem(v.inv() * h * u.mat() * v.mat());
}

Scalar tau_form_residual(const TriangularChart& ch, const GroupElem& k,
                         const GroupElem& u, const GroupElem& v,
                         const TriangularTangent& x, const TriangularTangent& y,
                         const Tolerances& tol) {
  if (!ch.pi.is_block_diagonal(x.k) || !ch.pi.is_block_diagonal(y.k))
    throw validation_error("tau_form_residual: k tangents must lie in the Levi");
  if (!ch.pi.is_strict_upper(x.u) || !ch.pi.is_strict_upper(y.u))
    throw validation_error("tau_form_residual: u tangents must be strictly upper");
  auto hu_jet = [&](const TriangularTangent& t) {
    Jet kj = jet_slot(k.mat(), t.k);
    Jet hj = jet_mul(jet_inv(kj), jet_mul(jet_const(ch.h0.mat()), kj));
    return jet_mul(hj, jet_slot(u.mat(), t.u));
  };
  auto image_jet = [&](const TriangularTangent& t) {
    Jet vj = jet_slot(v.mat(), t.v);
    return jet_mul(jet_inv(vj), jet_mul(hu_jet(t), vj));
  };
  Jet ix = image_jet(x);
  Jet iy = image_jet(y);
  Scalar lhs = conj_class_form_ambient(ix.val, ix.der, iy.der, tol);

  // omega_H in the k slot, through the base point h0.
  Matrix h0i = ch.h0.inv();
  Scalar omega_h = (trace_form(x.k, ch.h0.mat() * y.k * h0i) -
                    trace_form(y.k, ch.h0.mat() * x.k * h0i))
                       .div_int(2);

  Jet hux = hu_jet(x);
  Jet huy = hu_jet(y);
  Matrix hui = hux.val.inverse(tol);
  auto theta = [&](const Jet& hu, const Matrix& xiv) {
    return hui * hu.der + hu.der * hui + hux.val * xiv * hui;
  };
  Matrix thx = theta(hux, x.v);
  Matrix thy = theta(huy, y.v);
  Scalar corr = (trace_form(x.v, thy) - trace_form(y.v, thx)).div_int(2);
  return lhs - omega_h - corr;
}

}  // namespace wcv
