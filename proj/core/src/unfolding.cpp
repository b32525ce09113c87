#include "wcv/unfolding.hpp"

#include <algorithm>

#include "wcv/linalg.hpp"

namespace wcv {

namespace {

bool is_block_scalar_diag(const Matrix& t, const Partition& pi) {
  int n = pi.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!t.at(i, j).is_zero()) return false;
    }
  for (int i = 0; i + 1 < n; ++i)
    if (pi.same_block(i, i + 1) && !(t.at(i, i) == t.at(i + 1, i + 1)))
      return false;
  return true;
}

// Suffix parameter products T_i = t_{i+1} .. t_r (diagonal), i = 1..r.
std::vector<Matrix> suffix_products(const UnfoldingParams& up) {
  int r = up.r();
  int n = up.chain.n();
  Mode mode = up.ts[0].mode();
  std::vector<Matrix> t(r + 1, Matrix::identity(n, mode));
  for (int i = r - 1; i >= 1; --i) t[i] = up.ts[i] * t[i + 1];
  // t[i] holds t_{i+1} .. t_r; t[r] = I.
  return t;
}

struct UnfoldJets {
  Jet c, p;
  std::vector<Jet> ms;
};

// Jets of the full unfolding along one source tangent (pass a zero
// tangent for plain values).
UnfoldJets unfold_jets(const UnfoldingParams& up, const SpacePoint& pt,
                       const Tangent& tan) {
  int r = up.r();
  int n = up.chain.n();
  Mode mode = pt.slots[0].mode();
  std::vector<Matrix> suf = suffix_products(up);
  Matrix tall = up.ts[0] * suf[1];  // t_1 .. t_r

  Jet cj = jet_slot(pt.slots[0].mat(), tan.comps[0]);
  Jet hj = jet_slot(pt.slots[1].mat(), tan.comps[1]);
  // v_i^+/-, conjugated into position by the deeper parameters.
  std::vector<Jet> vplus, vminus;
  for (int i = 1; i <= r; ++i) {
    Jet up_j = jet_slot(pt.slots[2 * i].mat(), tan.comps[2 * i]);
    Jet um_j = jet_slot(pt.slots[2 * i + 1].mat(), tan.comps[2 * i + 1]);
    Jet ti = jet_const(suf[i]);
    vplus.push_back(jet_conj(ti, up_j));
    vminus.push_back(jet_conj(ti, um_j));
  }
  // w[i] = v_i^- .. v_r^-.
  std::vector<Jet> w(r + 1, jet_const(Matrix::identity(n, mode)));
  for (int i = r; i >= 1; --i) w[i - 1] = jet_mul(vminus[i - 1], w[i]);
  // w[0] = v_1^- .. v_r^- (stored shifted: w[i-1] for W_i).

  UnfoldJets out{cj, jet_mul(hj, jet_mul(jet_const(tall.inverse()), w[0])), {}};
  Jet cinv = jet_inv(cj);
  for (int i = 1; i <= r; ++i) {
    Jet wi = w[i - 1];
    Jet inner = jet_mul(jet_const(up.ts[i - 1]), vplus[i - 1]);
    Jet m = jet_mul(cinv, jet_mul(jet_inv(wi), jet_mul(inner, jet_mul(wi, cj))));
    out.ms.push_back(m);
  }
  return out;
}

Tangent zero_tangent_for(const SpaceModel& m, const SpacePoint& p) {
  Tangent t;
  t.comps.assign(p.slots.size(),
                 Matrix::zeros(p.slots[0].n(), p.slots[0].mode()));
  (void)m;
  return t;
}

}  // namespace

void UnfoldingParams::validate(const Tolerances& tol) const {
  chain.validate();
  if (int(ts.size()) != chain.depth())
    throw size_error("unfolding needs one parameter per chain level");
  if (ts.empty()) throw validation_error("unfolding needs at least one level");
  for (int j = 1; j <= int(ts.size()); ++j) {
    const Matrix& t = ts[j - 1];
    if (t.n() != chain.n()) throw size_error("parameter size differs from chain");
    if (!is_block_scalar_diag(t, chain.pi(j)))
      throw validation_error("parameter " + std::to_string(j) +
                             " is not block-scalar for its level");
    if (!t.invertible(tol))
      throw singular_error("parameter " + std::to_string(j) + " is singular");
  }
}

SpaceModel source_model(const UnfoldingParams& up) {
  return make_multi_fission(up.chain);
}

bool parameter_conditions_hold(const UnfoldingParams& up, const Matrix& h,
                               const Tolerances& tol) {
  up.validate(tol);
  for (int j = 1; j <= up.r(); ++j)
    if (!centralizer_equals_levi(up.ts[j - 1], up.chain.pi(j), tol)) return false;
  Matrix tall = up.ts[0];
  for (int j = 2; j <= up.r(); ++j) tall = tall * up.ts[j - 1];
  Matrix target = h * tall.inverse(tol);
  return centralizer_contained_in_levi(target, up.chain.pi(1), tol);
}

UnfoldResult unfold_rank1(const UnfoldingParams& up, const SpacePoint& p) {
  if (up.r() != 1) throw validation_error("unfold_rank1 needs a one-level chain");
  return unfold_full(up, p);
}

StepResult unfold_step(const UnfoldingParams& up, const SpacePoint& p) {
  int r = up.r();
  if (r < 2) throw validation_error("unfold_step needs at least two levels");
  validate_point(source_model(up), p);
  const Matrix& t = up.ts[r - 1];
  Matrix tinv = t.inverse();
  const GroupElem& c = p.slots[0];
  const GroupElem& h = p.slots[1];
  auto u = [&](int i) -> const GroupElem& { return p.slots[1 + i]; };

  std::vector<GroupElem> slots;
  slots.push_back(c);
  slots.emplace_back(h.mat() * tinv);
  for (int i = 1; i <= 2 * r - 3; ++i) slots.emplace_back(t * u(i).mat() * tinv);
  slots.emplace_back(t * u(2 * r - 2).mat() * tinv * u(2 * r).mat());

  GroupElem m(c.inv() * u(2 * r).inv() * t * u(2 * r - 1).mat() *
              u(2 * r).mat() * c.mat());

  UnfoldingParams down;
  down.chain.sigma = up.chain.sigma;
  down.chain.partitions.assign(up.chain.partitions.begin(),
                               up.chain.partitions.end() - 1);
  down.ts.assign(up.ts.begin(), up.ts.end() - 1);
  SpacePoint np{std::move(slots)};
  validate_point(source_model(down), np);
  return {std::move(down), std::move(np), std::move(m)};
}

UnfoldResult unfold_full(const UnfoldingParams& up, const SpacePoint& p) {
  up.validate();
  validate_point(source_model(up), p);
  UnfoldJets j = unfold_jets(up, p, zero_tangent_for(source_model(up), p));
  UnfoldResult res{GroupElem(j.c.val), GroupElem(j.p.val), {}};
  for (auto& m : j.ms) res.ms.emplace_back(m.val);
  return res;
}

UnfoldTangent unfold_differential(const UnfoldingParams& up, const SpacePoint& p,
                                  const Tangent& t) {
  validate_tangent(source_model(up), p, t);
  UnfoldJets j = unfold_jets(up, p, t);
  UnfoldTangent out;
  out.c = j.c.der * j.c.val.inverse();
  out.p = j.p.der * j.p.val.inverse();
  for (auto& m : j.ms) out.ms.push_back(m.der * m.val.inverse());
  return out;
}

MomentIntertwine moment_intertwine_residual(const UnfoldingParams& up,
                                            const SpacePoint& p,
                                            const Tolerances& tol) {
  SpaceModel src = source_model(up);
  Matrix src_g = moment(src, p)[0];
  UnfoldResult res = unfold_full(up, p);
  Matrix tgt_g = res.c.inv() * res.p.mat() * res.c.mat();
  for (const auto& m : res.ms) tgt_g = tgt_g * m.mat();
  Matrix tall = up.ts[0];
  for (int j = 2; j <= up.r(); ++j) tall = tall * up.ts[j - 1];
  Matrix varpi = up.chain.pi(1).block_diagonal_part(res.p.mat());
  Matrix expected_h = tall * p.slots[1].inv();
  return {tgt_g - src_g, varpi.inverse(tol) - expected_h};
}

Scalar unfolded_two_form(const Partition& pi1, const UnfoldResult& res,
                         const UnfoldTangent& x, const UnfoldTangent& y,
                         const Tolerances& tol) {
  if (!pi1.is_lower_parabolic(res.p.mat()))
    throw validation_error("unfolded representative left the lower parabolic");
  auto pair_part = [](const Matrix& ax, const Matrix& ay, const Matrix& bx,
                      const Matrix& by) {
    return (ax * by).trace() - (ay * bx).trace();
  };
  // mspace factor in the (C, p) slots.
  const Matrix& pm = res.p.mat();
  Matrix pmi = res.p.inv();
  auto sym = [&](const Matrix& xi) { return pmi * xi * pm + xi; };
  Scalar two_omega = pair_part(x.c, y.c, pm * x.c * pmi, pm * y.c * pmi);
  two_omega += pair_part(x.c, y.c, sym(x.p), sym(y.p));
  Scalar total = two_omega.div_int(2);
  // class factors, evaluated on the ambient tangents xi M.
  for (std::size_t i = 0; i < res.ms.size(); ++i)
    total += conj_class_form_ambient(res.ms[i].mat(), x.ms[i] * res.ms[i].mat(),
                                     y.ms[i] * res.ms[i].mat(), tol);
  // fusion corrections, factors ordered (mspace, M_1, .., M_r).
  auto mu1 = [&](const UnfoldTangent& t) {
    Jet cj{res.c.mat(), t.c * res.c.mat()};
    Jet pj{pm, t.p * pm};
    return jet_mul(jet_inv(cj), jet_mul(pj, cj));
  };
  Jet px = mu1(x), py = mu1(y);
  for (std::size_t i = 0; i < res.ms.size(); ++i) {
    Jet mx{res.ms[i].mat(), x.ms[i] * res.ms[i].mat()};
    Jet my{res.ms[i].mat(), y.ms[i] * res.ms[i].mat()};
    Matrix pinv = px.val.inverse(tol);
    Matrix minv = res.ms[i].inv();
    total -= pair_part(pinv * px.der, pinv * py.der, mx.der * minv,
                       my.der * minv)
                 .div_int(2);
    px = jet_mul(px, mx);
    py = jet_mul(py, my);
  }
  return total;
}

Scalar form_intertwine_residual(const UnfoldingParams& up, const SpacePoint& p,
                                const Tangent& x, const Tangent& y,
                                const Tolerances& tol) {
  SpaceModel src = source_model(up);
  Scalar lhs = two_form(src, p, x, y);
  UnfoldResult res = unfold_full(up, p);
  UnfoldTangent dx = unfold_differential(up, p, x);
  UnfoldTangent dy = unfold_differential(up, p, y);
  Scalar rhs = unfolded_two_form(up.chain.pi(1), res, dx, dy, tol);
  return lhs - rhs;
}

EtaleReport etale_rank_check(const UnfoldingParams& up, const SpacePoint& p,
                             const Tolerances& tol) {
  SpaceModel src = source_model(up);
  int n = up.chain.n();
  Mode mode = p.slots[0].mode();
  const Partition& pi1 = up.chain.pi(1);
  auto positions = tangent_positions(src);

  std::vector<Tangent> basis;
  for (std::size_t s = 0; s < positions.size(); ++s)
    for (auto [i, j] : positions[s]) {
      Tangent t;
      t.comps.assign(positions.size(), Matrix::zeros(n, mode));
      t.comps[s] = Matrix::elementary(n, mode, i, j);
      basis.push_back(std::move(t));
    }
  auto lower = pi1.strict_lower_positions();

  UnfoldResult res = unfold_full(up, p);
  int rr = up.r();
  int rows = (2 + rr) * n * n;
  Matrix sys(rows, int(basis.size() + lower.size()), mode);
  auto put = [&](int col, const UnfoldTangent& t, bool negate) {
    int row = 0;
    auto emit = [&](const Matrix& m) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Scalar v = m.at(i, j);
          sys.at(row++, col) = negate ? -v : v;
        }
    };
    emit(t.c);
    emit(t.p);
    for (const auto& m : t.ms) emit(m);
  };
  for (std::size_t k = 0; k < basis.size(); ++k)
    put(int(k), unfold_differential(up, p, basis[k]), false);
  for (std::size_t k = 0; k < lower.size(); ++k) {
    Matrix w = Matrix::elementary(n, mode, lower[k].first, lower[k].second);
    UnfoldTangent orbit;
    orbit.c = w;
    orbit.p = w - res.p.mat() * w * res.p.inv();
    orbit.ms.assign(rr, Matrix::zeros(n, mode));
    put(int(basis.size() + k), orbit, true);
  }
  EtaleReport rep;
  rep.kernel_dim = int(kernel_basis(sys, tol).size());
  rep.full_rank = rep.kernel_dim == 0;
  rep.source_dim = int(basis.size());
  // Quotient dimension of the target: the (C, p) chart modulo the
  // unipotent action, plus each class with its computed centralizer.
  rep.target_dim = n * n + int(pi1.lower_parabolic_positions().size()) -
                   pi1.dim_unipotent();
  for (const auto& m : res.ms)
    rep.target_dim +=
        n * n - int(centralizer_subalgebra(m.mat(), tol).size());
  return rep;
}

std::vector<Matrix> unfolded_residues(const std::vector<Matrix>& lambdas,
                                      const std::vector<Scalar>& eps) {
  if (lambdas.size() != eps.size() || lambdas.empty())
    throw size_error("need one residue and one eps per level plus the tame slot");
  int r = int(lambdas.size()) - 1;
  for (int i = 0; i <= r; ++i)
    for (int l = 0; l < i; ++l)
      if (eps[i] == eps[l])
        throw validation_error("unfolding positions must be pairwise distinct");
  int n = lambdas[0].n();
  Mode mode = lambdas[0].mode();
  std::vector<Matrix> out;
  for (int i = 0; i <= r; ++i) {
    Matrix acc = Matrix::zeros(n, mode);
    for (int j = i; j <= r; ++j) {
      Scalar factor = Scalar::one(mode);
      for (int l = 0; l <= j; ++l) {
        if (l == i) continue;
        factor = factor * (eps[i] - eps[l]).inv();
      }
      acc = acc + lambdas[j].scaled(factor);
    }
    out.push_back(acc);
  }
  return out;
}

Matrix diag_exp_2pi_i(const Matrix& lambda) {
  if (lambda.mode() != Mode::floating)
    throw mode_error("exponentials need floating mode");
  int n = lambda.n();
  Matrix out = Matrix::zeros(n, Mode::floating);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !lambda.at(i, j).is_zero())
        throw validation_error("exponential input must be diagonal");
  const double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = lambda.at(i, i).float_val();
    out.at(i, i) = Scalar::floating(std::exp(std::complex<double>(0, two_pi) * z));
  }
  return out;
}

ParameterSearch search_parameters(Rng& rng, const LeviChain& chain,
                                  const Matrix& h, int max_trials,
                                  const Tolerances& tol) {
  chain.validate();
  int n = chain.n();
  Mode mode = h.mode();
  // Small pool of nonzero rationals; block values are drawn independently,
  // so equal adjacent draws simply fail the centralizer test and retry.
  std::vector<Scalar> pool;
  auto pool_value = [&](long num, long den) {
    Scalar s = Scalar::exact_int(num).div_int(den);
    return mode == Mode::floating ? s.to_float() : s;
  };
  for (int k = 1; k <= 13; ++k) {
    for (int s : {1, -1}) {
      pool.push_back(pool_value(s * k, 1));
      pool.push_back(pool_value(s * k, 2));
    }
  }
  ParameterSearch out;
  for (int trial = 0; trial < max_trials; ++trial) {
    ++out.trials;
    UnfoldingParams up;
    up.chain = chain;
    for (int j = 1; j <= chain.depth(); ++j) {
      const Partition& pj = chain.pi(j);
      Matrix t = Matrix::zeros(n, mode);
      for (int b = 0; b < pj.num_blocks(); ++b) {
        Scalar v = pool[std::size_t(rng.uniform(0, int(pool.size()) - 1))];
        int start = pj.block_start(b);
        for (int i = 0; i < pj.sizes()[b]; ++i) t.at(start + i, start + i) = v;
      }
      up.ts.push_back(std::move(t));
    }
    bool ok = true;
    for (const auto& t : up.ts)
      if (!t.invertible(tol)) ok = false;
    if (!ok) continue;
    if (!parameter_conditions_hold(up, h, tol)) continue;
    out.found = true;
    out.ts = std::move(up.ts);
    return out;
  }
  return out;
}

}  // namespace wcv
