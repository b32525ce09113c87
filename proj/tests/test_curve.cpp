#include "doctest.h"
#include "helpers.hpp"

using namespace th;

namespace {

IrregularType tame_type(int n, Mode mode = Mode::exact) {
  return IrregularType{n, mode, {}};
}

IrregularType rank1_type() {
  // One level, regular semisimple leading term: finest chain is discrete.
  return IrregularType{2, Mode::exact, {di({1, 2})}};
}

}  // namespace

TEST_CASE("completing the relation on a one-handle curve") {
  CurveData curve;
  curve.genus = 1;
  curve.n = 2;
  curve.points = {MarkedPoint{tame_type(2)}};
  curve.validate();

  GroupElem a(mi(2, {1, 1, 0, 1}));
  GroupElem b(mi(2, {1, 0, 1, 1}));
  RepPoint partial;
  partial.handles = {{a, b}};
  RepPoint rp = complete_relation(curve, partial);

  REQUIRE(rp.marked.size() == 1);
  CHECK(rp.marked[0].c.mat() == Matrix::identity(2, Mode::exact));
  Matrix commutator = a.mat() * b.mat() * a.inv() * b.inv();
  CHECK(rp.marked[0].h.mat() == commutator.inverse());
  CHECK(marked_factor(curve, rp, 0) == commutator.inverse());
  CHECK(moment_relation_residual(curve, rp).is_zero());
  CHECK(det_condition_residual(curve, rp).is_zero());

  // Unipotent handle pair acts irreducibly.
  StabilityReport st = stability_check(curve, rp);
  CHECK(st.stable);
  CHECK(st.algebra_dim == 4);
}

TEST_CASE("triangular torus data is unstable") {
  CurveData curve;
  curve.genus = 0;
  curve.n = 2;
  curve.points = {MarkedPoint{tame_type(2)}, MarkedPoint{tame_type(2)}};

  GroupElem id = GroupElem::identity(2, Mode::exact);
  GroupElem h0(mi(2, {2, 1, 0, 1}));
  RepPoint rp;
  rp.marked = {{id, h0, {}}, {id, h0.inverse(), {}}};
  CHECK(moment_relation_residual(curve, rp).is_zero());
  CHECK(det_condition_residual(curve, rp).is_zero());

  StabilityReport st = stability_check(curve, rp);
  CHECK(!st.stable);
  CHECK(st.algebra_dim == 2);
}

TEST_CASE("random representations land on the fiber") {
  CurveData curve;
  curve.genus = 1;
  curve.n = 2;
  curve.points = {MarkedPoint{rank1_type()}, MarkedPoint{tame_type(2)}};
  Rng rng(211);
  for (int trial = 0; trial < 4; ++trial) {
    RepPoint rp = random_rep_point(rng, curve);
    validate_rep_point(curve, rp);
    CHECK(moment_relation_residual(curve, rp).is_zero());
    CHECK(det_condition_residual(curve, rp).is_zero());
  }
}

TEST_CASE("unfolding a curve preserves the relation") {
  CurveData curve;
  curve.genus = 1;
  curve.n = 2;
  curve.points = {MarkedPoint{rank1_type()}, MarkedPoint{tame_type(2)}};
  LeviChain chain = levi_chain(rank1_type());
  REQUIRE(chain.depth() == 1);
  REQUIRE(chain.pi(1) == Partition(2, {1, 1}));

  Rng rng(223);
  RepPoint rp = random_rep_point(rng, curve);
  ParameterSearch ps =
      search_parameters(rng, chain, rp.marked[0].h.mat(), 1000);
  REQUIRE(ps.found);
  UnfoldingParams up{chain, ps.ts};

  UnfoldedCurve uc = unfold_wcv(curve, rp, {up, std::nullopt});
  // p slot + one class slot + the untouched tame point.
  REQUIRE(uc.curve.points.size() == 3);
  for (const auto& mp : uc.curve.points) CHECK(mp.type.depth() == 0);
  CHECK(moment_relation_residual(uc.curve, uc.rep).is_zero());
  CHECK(det_condition_residual(uc.curve, uc.rep).is_zero());

  // The p slot carries the announced tame class of h t^-1 ...
  Matrix twisted = rp.marked[0].h.mat() * up.ts[0].inverse();
  auto cp = char_poly(marked_factor(uc.curve, uc.rep, 0));
  auto ct = char_poly(twisted);
  for (size_t k = 0; k < cp.size(); ++k) CHECK(cp[k] == ct[k]);
  // ... and the class slot stays in the class of t.
  CHECK(uc.rep.marked[1].c.mat() == Matrix::identity(2, Mode::exact));
  auto cm = char_poly(marked_factor(uc.curve, uc.rep, 1));
  auto cs = char_poly(up.ts[0]);
  for (size_t k = 0; k < cm.size(); ++k) CHECK(cm[k] == cs[k]);

  // The p slot is lower parabolic and conjugates onto its diagonal part.
  Matrix p = uc.rep.marked[0].h.mat();
  REQUIRE(chain.pi(1).is_lower_parabolic(p));
  Matrix w = conj_to_block_diagonal_lower(p, chain.pi(1));
  CHECK(w.inverse() * p * w == chain.pi(1).block_diagonal_part(p));

  // The untouched point is copied through.
  CHECK(uc.rep.marked[2].h.mat() == rp.marked[1].h.mat());
}

TEST_CASE("unfold_wcv rejects mismatched inputs") {
  CurveData curve;
  curve.genus = 0;
  curve.n = 2;
  curve.points = {MarkedPoint{rank1_type()}, MarkedPoint{tame_type(2)}};
  Rng rng(227);
  RepPoint rp = random_rep_point(rng, curve);
  LeviChain chain = levi_chain(rank1_type());
  ParameterSearch ps =
      search_parameters(rng, chain, rp.marked[0].h.mat(), 1000);
  REQUIRE(ps.found);
  UnfoldingParams up{chain, ps.ts};

  // Missing parameters for the irregular point.
  CHECK_THROWS_AS((void)unfold_wcv(curve, rp, {std::nullopt, std::nullopt}),
                  validation_error);
  // Parameters handed to the tame point.
  CHECK_THROWS_AS((void)unfold_wcv(curve, rp, {up, up}), validation_error);
  // Wrong chain shape.
  UnfoldingParams wrong{LeviChain::trivial(2, {Partition::full(2)}),
                        {Matrix::identity(2, Mode::exact).scaled(qi(3))}};
  CHECK_THROWS_AS((void)unfold_wcv(curve, rp, {wrong, std::nullopt}),
                  validation_error);

  // Stokes charts cannot be unfolded in place.
  CurveData scurve;
  scurve.genus = 0;
  scurve.n = 2;
  scurve.points = {MarkedPoint{rank1_type(), TailKind::stokes},
                   MarkedPoint{tame_type(2)}};
  RepPoint srp = random_rep_point(rng, scurve);
  CHECK(moment_relation_residual(scurve, srp).is_zero());
  CHECK_THROWS_AS(
      (void)unfold_wcv(scurve, srp, {std::nullopt, std::nullopt}),
      validation_error);
}

TEST_CASE("stokes charts satisfy the same relation and stability API") {
  CurveData curve;
  curve.genus = 1;
  curve.n = 2;
  curve.points = {MarkedPoint{rank1_type(), TailKind::stokes},
                  MarkedPoint{tame_type(2)}};
  Rng rng(229);
  RepPoint rp = random_rep_point(rng, curve);
  CHECK(moment_relation_residual(curve, rp).is_zero());
  StabilityReport st = stability_check(curve, rp);
  CHECK(st.algebra_dim >= 1);
  CHECK(st.algebra_dim <= 4);
}
