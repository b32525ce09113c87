#include "wcv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wcv/curve.hpp"
#include "wcv/linalg.hpp"

namespace wcv {

namespace {

struct Checker {
  VerifyReport rep;
  const VerifyOptions& opt;

  explicit Checker(std::string suite, const VerifyOptions& o) : opt(o) {
    rep.suite = std::move(suite);
  }

  void fail(const std::string& where, const std::string& detail) {
    if (rep.failures.size() < 100)
      rep.failures.push_back(where + ": " + detail);
  }

  void require(const std::string& where, bool cond,
               const std::string& detail = "predicate failed") {
    ++rep.checks;
    if (!cond) fail(where, detail);
  }

  // Residuals are compared at zero: exactly in exact mode, relative to
  // the witnessed magnitudes in floating mode.
  void scalar_zero(const std::string& where, const Scalar& s, double scale) {
    ++rep.checks;
    if (s.mode() == Mode::exact) {
      if (!s.is_zero()) fail(where, "nonzero exact residual " + s.str());
      return;
    }
    double mag = std::abs(s.approx());
    if (mag > opt.tol.identity * (1.0 + scale)) {
      std::ostringstream ss;
      ss << "float residual " << mag << " over scale " << scale;
      fail(where, ss.str());
    }
  }

  void matrix_zero(const std::string& where, const Matrix& m, double scale) {
    ++rep.checks;
    if (m.mode() == Mode::exact) {
      if (!m.is_zero()) fail(where, "nonzero exact residual");
      return;
    }
    double mag = m.max_abs();
    if (mag > opt.tol.identity * (1.0 + scale)) {
      std::ostringstream ss;
      ss << "float residual " << mag << " over scale " << scale;
      fail(where, ss.str());
    }
  }
};

std::string trial_tag(const std::string& what, int trial, std::uint64_t seed) {
  std::ostringstream ss;
  ss << what << " trial " << trial << " seed 0x" << std::hex << seed;
  return ss.str();
}

double magnitude(const Matrix& m) { return m.max_abs(); }

double point_magnitude(const SpacePoint& p) {
  double s = 1.0;
  for (const auto& g : p.slots) {
    s = std::max(s, g.mat().max_abs());
    s = std::max(s, g.inv().max_abs());
  }
  return s;
}

double tangent_magnitude(const Tangent& t) {
  double s = 1.0;
  for (const auto& c : t.comps) s = std::max(s, c.max_abs());
  return s;
}

// Crude magnitude bound for degree-<=6 expressions in the inputs; only
// used to scale floating-point zero tests.
double residual_scale(const SpacePoint& p, double extra = 1.0) {
  double base = point_magnitude(p);
  double s = base * base;
  s = s * s * (1.0 + base) * (1.0 + base);
  return s * extra;
}

IrregularType random_type(Rng& rng, int n, int depth, Mode mode) {
  IrregularType q;
  q.n = n;
  q.mode = mode;
  for (int j = 1; j <= depth; ++j) {
    Matrix c = Matrix::zeros(n, mode);
    bool nonzero = false;
    for (int attempt = 0; attempt < 16 && !nonzero; ++attempt) {
      for (int i = 0; i < n; ++i) {
        c.at(i, i) = rng.scalar(mode, 2, true);
        if (!c.at(i, i).is_zero()) nonzero = true;
      }
      if (j < depth) break;  // only the leading coefficient must be nonzero
    }
    if (j == depth && !nonzero) c.at(0, 0) = Scalar::one(mode);
    q.coeffs.push_back(std::move(c));
  }
  q.validate();
  return q;
}

// Block-diagonal invertible with no centralizer outside the Levi
// (generic: distinct block spectra).
std::optional<Matrix> search_regular_levi(Rng& rng, const Partition& pi,
                                          Mode mode, const Tolerances& tol,
                                          int tries = 64) {
  for (int k = 0; k < tries; ++k) {
    Matrix m = random_block_diag_invertible(rng, pi, mode);
    if (centralizer_contained_in_levi(m, pi, tol)) return m;
  }
  return std::nullopt;
}

const SpaceModel& factor_leaf(const SpaceModel& m, const ActingFactor& f) {
  const SpaceModel* cur = &m;
  for (int s : f.path) cur = &std::get<FusionModel>(cur->v).children[s];
  return *cur;
}

Matrix random_factor_lie(Rng& rng, const SpaceModel& m, const ActingFactor& f,
                         Mode mode) {
  int n = model_n(m);
  if (!f.hfactor) return random_matrix(rng, n, mode);
  const SpaceModel& leaf = factor_leaf(m, f);
  return std::visit(
      [&](const auto& mm) -> Matrix {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, DoubleModel>)
          return random_matrix(rng, n, mode);
        else if constexpr (std::is_same_v<T, FissionModel>)
          return random_block_diag_lie(rng, mm.pi, mode);
        else if constexpr (std::is_same_v<T, MultiFissionModel>)
          return random_block_diag_lie(rng, mm.chain.pi(1), mode);
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return random_label_block_diag_lie(rng, mm.levi_labels, mode);
        else if constexpr (std::is_same_v<T, MSpaceModel>)
          return random_block_diag_lie(rng, mm.pi, mode);
        else
          throw validation_error("factor path must end at a leaf");
      },
      leaf.v);
}

}  // namespace

VerifyReport verify_qh2(const VerifyOptions& opt) {
  Checker ck("qh2", opt);
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::uint64_t ts = derive_seed(opt.seed, std::uint64_t(trial));
    Rng rng(ts);
    int n = rng.uniform(2, std::max(2, opt.max_n));
    Mode mode = opt.mode;

    std::vector<SpaceModel> models;
    models.push_back(make_conj_class(random_invertible(rng, n, mode)));
    models.push_back(make_double(n));
    models.push_back(make_fission(random_interval_partition(rng, n),
                                  rng.uniform(1, 2)));
    models.push_back(
        make_multi_fission(random_levi_chain(rng, n, rng.uniform(1, 2))));
    models.push_back(make_stokes_space(random_type(rng, n, rng.uniform(1, 2), mode)));
    models.push_back(make_mspace(random_interval_partition(rng, n)));
    models.push_back(fuse({make_double(n),
                           make_conj_class(random_invertible(rng, n, mode)),
                           make_mspace(random_interval_partition(rng, n))}));

    for (const auto& model : models) {
      std::string tag = trial_tag("qh2 " + model_name(model), trial, ts);
      SpacePoint p = random_point(rng, model, mode);
      Tangent y = random_tangent(rng, model, mode);
      Tangent x = random_tangent(rng, model, mode);
      double scale =
          residual_scale(p, tangent_magnitude(x) * tangent_magnitude(y));
      ck.scalar_zero(tag + " antisymmetry",
                     two_form(model, p, x, y) + two_form(model, p, y, x), scale);
      for (const auto& f : acting_factors(model)) {
        Matrix xi = random_factor_lie(rng, model, f, mode);
        Scalar res = qh2_residual(model, p, f, xi, y);
        double s = residual_scale(
            p, (1.0 + magnitude(xi)) * tangent_magnitude(y));
        ck.scalar_zero(tag + " factor " + factor_name(f), res, s);
      }
    }
  }
  return ck.rep;
}

VerifyReport verify_triangular(const VerifyOptions& opt) {
  Checker ck("triangular", opt);
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::uint64_t ts = derive_seed(opt.seed, 0x7400 + std::uint64_t(trial));
    Rng rng(ts);
    int n = rng.uniform(2, std::max(2, opt.max_n));
    Mode mode = opt.mode;
    Partition pi = random_interval_partition(rng, n);
    auto h0 = search_regular_levi(rng, pi, mode, opt.tol);
    std::string tag = trial_tag("triangular", trial, ts);
    if (!h0) {
      ck.fail(tag, "no regular Levi element found");
      continue;
    }

    // Conjugation solve, upper: u recovers from (h^-1 u^-1 h) u.
    Matrix u = random_unipotent_upper(rng, pi, mode);
    Matrix target = h0->inverse(opt.tol) * u.inverse(opt.tol) * *h0 * u;
    Matrix solved = solve_conj_unip(*h0, target, pi, opt.tol);
    ck.matrix_zero(tag + " solve_conj_unip", solved - u,
                   magnitude(u) * magnitude(*h0) * magnitude(*h0));

    // Conjugation to the diagonal part, lower.
    Matrix p = *h0 + random_strict_lower(rng, pi, mode);
    Matrix w = conj_to_block_diagonal_lower(p, pi, opt.tol);
    ck.require(tag + " conj witness unipotent", pi.is_unipotent_lower(w));
    ck.matrix_zero(tag + " conj_to_block_diagonal_lower",
                   w.inverse(opt.tol) * p * w - *h0,
                   magnitude(p) * magnitude(w) * magnitude(w));

    // tau two-form identity.
    TriangularChart chart(pi, *h0, opt.tol);
    GroupElem k(random_block_diag_invertible(rng, pi, mode), opt.tol);
    GroupElem uu(random_unipotent_upper(rng, pi, mode), opt.tol);
    GroupElem v(random_invertible(rng, n, mode), opt.tol);
    TriangularTangent x{random_block_diag_lie(rng, pi, mode),
                        random_strict_upper(rng, pi, mode),
                        random_matrix(rng, n, mode)};
    TriangularTangent y{random_block_diag_lie(rng, pi, mode),
                        random_strict_upper(rng, pi, mode),
                        random_matrix(rng, n, mode)};
    Scalar res = tau_form_residual(chart, k, uu, v, x, y, opt.tol);
    double s = magnitude(k.mat()) * magnitude(k.inv()) + magnitude(v.mat()) +
               magnitude(v.inv()) + magnitude(uu.mat());
    ck.scalar_zero(tag + " tau form", res, s * s * s * s);
  }
  return ck.rep;
}

VerifyReport verify_unfold(const VerifyOptions& opt) {
  Checker ck("unfold", opt);
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::uint64_t ts = derive_seed(opt.seed, 0x4600 + std::uint64_t(trial));
    Rng rng(ts);
    int n = rng.uniform(2, std::max(2, opt.max_n));
    Mode mode = opt.mode;
    int depth = rng.uniform(1, 2);
    LeviChain chain = random_levi_chain(rng, n, depth);
    SpaceModel model = make_multi_fission(chain);
    SpacePoint point = random_point(rng, model, mode);
    std::string tag = trial_tag("unfold", trial, ts);

    ParameterSearch ps =
        search_parameters(rng, chain, point.slots[1].mat(), 1000, opt.tol);
    ck.require(tag + " parameter search", ps.found,
               "no admissible parameters in 1000 trials");
    if (!ps.found) continue;
    UnfoldingParams up{chain, ps.ts};

    MomentIntertwine mi = moment_intertwine_residual(up, point, opt.tol);
    double scale = residual_scale(point, 16.0);
    ck.matrix_zero(tag + " moment G", mi.g_residual, scale);
    ck.matrix_zero(tag + " moment H", mi.h_residual, scale);

    Tangent tx = random_tangent(rng, model, mode);
    Tangent ty = random_tangent(rng, model, mode);
    Scalar fr = form_intertwine_residual(up, point, tx, ty, opt.tol);
    ck.scalar_zero(tag + " two-form",fr,
                   scale * tangent_magnitude(tx) * tangent_magnitude(ty) * 16.0);

    // Step-by-step composition agrees with the closed formulas.
    UnfoldResult full = unfold_full(up, point);
    {
      UnfoldingParams cp = up;
      SpacePoint cur = point;
      std::vector<GroupElem> deep;
      while (cp.r() >= 2) {
        StepResult sr = unfold_step(cp, cur);
        deep.push_back(sr.m);
        cp = std::move(sr.params);
        cur = std::move(sr.point);
      }
      UnfoldResult base = unfold_rank1(cp, cur);
      std::vector<GroupElem> ms = base.ms;
      for (auto it = deep.rbegin(); it != deep.rend(); ++it) ms.push_back(*it);
      ck.matrix_zero(tag + " composition c", base.c.mat() - full.c.mat(), scale);
      ck.matrix_zero(tag + " composition p", base.p.mat() - full.p.mat(), scale);
      ck.require(tag + " composition count", ms.size() == full.ms.size());
      for (std::size_t i = 0; i < ms.size() && i < full.ms.size(); ++i)
        ck.matrix_zero(tag + " composition m" + std::to_string(i),
                       ms[i].mat() - full.ms[i].mat(), scale);
    }

    EtaleReport er = etale_rank_check(up, point, opt.tol);
    ck.require(tag + " etale dims", er.source_dim == er.target_dim,
               "source and target dimensions differ");
    ck.require(tag + " etale rank", er.full_rank,
               "kernel dimension " + std::to_string(er.kernel_dim));

    // Residue translation: the hatted residues resum to the tame one.
    int rr = rng.uniform(1, 3);
    std::vector<Matrix> lambdas;
    std::vector<Scalar> eps;
    for (int j = 0; j <= rr; ++j) {
      Matrix d = Matrix::zeros(n, mode);
      for (int i = 0; i < n; ++i) d.at(i, i) = rng.scalar(mode, 3, true);
      lambdas.push_back(std::move(d));
      Scalar e = Scalar::exact_int(2 * j + rng.uniform(0, 1)).div_int(2);
      eps.push_back(mode == Mode::floating ? e.to_float() : e);
    }
    auto hats = unfolded_residues(lambdas, eps);
    Matrix sum = Matrix::zeros(n, mode);
    for (const auto& h : hats) sum = sum + h;
    ck.matrix_zero(tag + " residue sum", sum - lambdas[0], 64.0);

    // Exponential bridge (floating): commuting diagonal exponentials.
    Matrix prod = Matrix::identity(n, Mode::floating);
    for (const auto& h : hats)
      prod = prod * diag_exp_2pi_i(mode == Mode::floating ? h : h.to_float());
    Matrix expected = diag_exp_2pi_i(mode == Mode::floating
                                         ? lambdas[0]
                                         : lambdas[0].to_float());
    Tolerances bridge_tol;
    double bmag = (prod - expected).max_abs();
    ++ck.rep.checks;
    if (bmag > bridge_tol.identity * (1.0 + prod.max_abs() * 8))
      ck.fail(tag + " exponential bridge", "residual " + std::to_string(bmag));
  }
  return ck.rep;
}

VerifyReport verify_wcv(const VerifyOptions& opt) {
  Checker ck("wcv", opt);
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::uint64_t ts = derive_seed(opt.seed, 0x9c00 + std::uint64_t(trial));
    Rng rng(ts);
    int n = rng.uniform(2, std::max(2, opt.max_n));
    Mode mode = opt.mode;
    std::string tag = trial_tag("wcv", trial, ts);

    CurveData curve;
    curve.genus = rng.uniform(0, 1);
    curve.n = n;
    curve.mode = mode;
    curve.points.push_back({random_type(rng, n, rng.uniform(1, 2), mode),
                            TailKind::fission});
    if (rng.coin())
      curve.points.push_back({IrregularType{n, mode, {}}, TailKind::fission});
    curve.points.push_back({IrregularType{n, mode, {}}, TailKind::fission});

    RepPoint rp = random_rep_point(rng, curve, opt.tol);
    double scale = 1.0;
    for (const auto& s : rp.marked) {
      scale = std::max(scale, s.h.mat().max_abs());
      scale = std::max(scale, s.c.mat().max_abs());
    }
    scale = scale * scale * scale * scale;

    ck.matrix_zero(tag + " relation", moment_relation_residual(curve, rp),
                   scale * scale);
    ck.scalar_zero(tag + " det", det_condition_residual(curve, rp, opt.tol),
                   scale * scale);

    LeviChain chain = levi_chain(curve.points[0].type);
    ParameterSearch ps =
        search_parameters(rng, chain, rp.marked[0].h.mat(), 1000, opt.tol);
    ck.require(tag + " parameter search", ps.found,
               "no admissible parameters in 1000 trials");
    if (!ps.found) continue;
    std::vector<std::optional<UnfoldingParams>> params(curve.points.size(),
                                                       std::nullopt);
    params[0] = UnfoldingParams{chain, ps.ts};

    UnfoldedCurve uc = unfold_wcv(curve, rp, params, opt.tol);
    ck.matrix_zero(tag + " unfolded relation",
                   moment_relation_residual(uc.curve, uc.rep), scale * scale);
    ck.scalar_zero(tag + " unfolded det",
                   det_condition_residual(uc.curve, uc.rep, opt.tol),
                   scale * scale);

    // The tame class created at the pole carries the formal type: the
    // parabolic slot is block triangular, so its characteristic data is
    // that of h (t_1 .. t_r)^-1.
    Matrix tall = params[0]->ts[0];
    for (int j = 2; j <= params[0]->r(); ++j) tall = tall * params[0]->ts[j - 1];
    Matrix expected = rp.marked[0].h.mat() * tall.inverse(opt.tol);
    auto cp_lhs = char_poly(marked_factor(uc.curve, uc.rep, 0));
    auto cp_rhs = char_poly(expected);
    ck.require(tag + " char size", cp_lhs.size() == cp_rhs.size());
    for (std::size_t i = 0; i < cp_lhs.size() && i < cp_rhs.size(); ++i)
      ck.scalar_zero(tag + " char coeff " + std::to_string(i),
                     cp_lhs[i] - cp_rhs[i], scale * scale);

    // Under the parameter conditions the parabolic slot is conjugate to
    // its block-diagonal part inside the lower unipotent group.
    const Partition& pi1 = chain.pi(1);
    Matrix pslot = uc.rep.marked[0].h.mat();
    Matrix w = conj_to_block_diagonal_lower(pslot, pi1, opt.tol);
    ck.matrix_zero(tag + " parabolic class",
                   w.inverse(opt.tol) * pslot * w - pi1.block_diagonal_part(pslot),
                   scale * scale);

    StabilityReport st = stability_check(curve, rp, opt.tol);
    ck.require(tag + " algebra dim bound",
               st.algebra_dim >= 1 && st.algebra_dim <= n * n);
  }
  return ck.rep;
}

std::vector<VerifyReport> verify_all(const VerifyOptions& opt) {
  return {verify_qh2(opt), verify_triangular(opt), verify_unfold(opt),
          verify_wcv(opt)};
}

}  // namespace wcv
