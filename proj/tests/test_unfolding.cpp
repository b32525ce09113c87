#include "doctest.h"
#include "helpers.hpp"

using namespace th;

namespace {

UnfoldingParams worked_params() {
  LeviChain chain = LeviChain::trivial(2, {Partition(2, {1, 1})});
  return UnfoldingParams{chain, {di({2, 1})}};
}

SpacePoint worked_point(const UnfoldingParams& up) {
  return make_point(source_model(up),
                    {Matrix::identity(2, Mode::exact), di({3, 5}),
                     mi(2, {1, 1, 0, 1}), mi(2, {1, 0, 1, 1})});
}

}  // namespace

TEST_CASE("one-level unfolding on the worked point") {
  UnfoldingParams up = worked_params();
  up.validate();
  SpacePoint pt = worked_point(up);

  UnfoldResult res = unfold_rank1(up, pt);
  CHECK(res.c.mat() == Matrix::identity(2, Mode::exact));
  CHECK(res.p.mat() == mr(2, {"3/2", "0", "5", "5"}));
  REQUIRE(res.ms.size() == 1);
  CHECK(res.ms[0].mat() == mi(2, {4, 2, -3, -1}));

  UnfoldResult full = unfold_full(up, pt);
  CHECK(full.p.mat() == res.p.mat());
  CHECK(full.ms[0].mat() == res.ms[0].mat());

  // Target G moment reproduces the source moment ...
  Matrix target_g = res.c.inv() * res.p.mat() * res.c.mat() * res.ms[0].mat();
  CHECK(target_g == mi(2, {6, 3, 5, 5}));
  // ... and the target H moment is the twisted source one.
  Partition pi1(2, {1, 1});
  Matrix target_h = pi1.block_diagonal_part(res.p.mat()).inverse();
  CHECK(target_h == dr({"2/3", "1/5"}));

  MomentIntertwine mi_res = moment_intertwine_residual(up, pt);
  CHECK(mi_res.g_residual.is_zero());
  CHECK(mi_res.h_residual.is_zero());
}

TEST_CASE("parameter conditions") {
  UnfoldingParams up = worked_params();
  CHECK(parameter_conditions_hold(up, di({3, 5})));
  // Central t fails regularity.
  UnfoldingParams bad{up.chain, {Matrix::identity(2, Mode::exact)}};
  CHECK(!parameter_conditions_hold(bad, di({3, 5})));
  // h t^-1 with repeated diagonal centralizes outside the finest Levi.
  CHECK(!parameter_conditions_hold(up, di({2, 1})));
}

TEST_CASE("params validation rejects non-block-scalar levels") {
  LeviChain chain = LeviChain::trivial(2, {Partition(2, {1, 1})});
  UnfoldingParams up{chain, {di({2, 1})}};
  up.validate();
  // pi_1 = full(2) needs t scalar on the whole block.
  LeviChain coarse = LeviChain::trivial(2, {Partition::full(2)});
  UnfoldingParams bad{coarse, {di({2, 1})}};
  CHECK_THROWS_AS(bad.validate(), validation_error);
}

TEST_CASE("moment and form intertwining on seeded two-level chains") {
  LeviChain chain = LeviChain::trivial(
      3, {Partition(3, {1, 1, 1}), Partition(3, {2, 1})});
  SpaceModel model = make_multi_fission(chain);
  Rng rng(101);
  for (int trial = 0; trial < 3; ++trial) {
    SpacePoint pt = random_point(rng, model, Mode::exact);
    ParameterSearch ps =
        search_parameters(rng, chain, pt.slots[1].mat(), 1000);
    REQUIRE(ps.found);
    UnfoldingParams up{chain, ps.ts};
    REQUIRE(parameter_conditions_hold(up, pt.slots[1].mat()));

    MomentIntertwine mi_res = moment_intertwine_residual(up, pt);
    CHECK(mi_res.g_residual.is_zero());
    CHECK(mi_res.h_residual.is_zero());

    Tangent x = random_tangent(rng, model, Mode::exact);
    Tangent y = random_tangent(rng, model, Mode::exact);
    CHECK(form_intertwine_residual(up, pt, x, y).is_zero());
  }
}

TEST_CASE("step truncation composes to the full unfolding") {
  LeviChain chain = LeviChain::trivial(
      3, {Partition(3, {1, 1, 1}), Partition(3, {2, 1})});
  SpaceModel model = make_multi_fission(chain);
  Rng rng(103);
  SpacePoint pt = random_point(rng, model, Mode::exact);
  ParameterSearch ps = search_parameters(rng, chain, pt.slots[1].mat(), 1000);
  REQUIRE(ps.found);
  UnfoldingParams up{chain, ps.ts};

  StepResult step = unfold_step(up, pt);
  CHECK(step.params.r() == 1);
  UnfoldResult rest = unfold_full(step.params, step.point);
  UnfoldResult full = unfold_full(up, pt);
  CHECK(full.c.mat() == rest.c.mat());
  CHECK(full.p.mat() == rest.p.mat());
  REQUIRE(full.ms.size() == 2);
  // The step peels the deepest level: its class element comes last.
  CHECK(full.ms[0].mat() == rest.ms[0].mat());
  CHECK(full.ms[1].mat() == step.m.mat());
}

TEST_CASE("etale certificate on the worked point") {
  UnfoldingParams up = worked_params();
  SpacePoint pt = worked_point(up);
  EtaleReport rep = etale_rank_check(up, pt);
  CHECK(rep.source_dim == 8);
  CHECK(rep.target_dim == 8);
  CHECK(rep.kernel_dim == 0);
  CHECK(rep.full_rank);
}

TEST_CASE("unfolded residues satisfy the partial-fraction identity") {
  // Lambda_0 = diag(1,2), Lambda_1 = diag(3,-3), eps = (0,1):
  //   hat Lambda_0 = Lambda_0 (e0-e1)^0 ... manual expansion gives
  //   hat Lambda_0 = diag(-2,5), hat Lambda_1 = diag(3,-3).
  std::vector<Matrix> lam = {di({1, 2}), di({3, -3})};
  std::vector<Scalar> eps = {qi(0), qi(1)};
  auto hats = unfolded_residues(lam, eps);
  REQUIRE(hats.size() == 2);
  CHECK(hats[0] == di({-2, 5}));
  CHECK(hats[1] == di({3, -3}));
  CHECK(hats[0] + hats[1] == lam[0]);

  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + int(rng.uniform(0, 1));
    int r = 1 + int(rng.uniform(0, 3));
    std::vector<Matrix> ls;
    for (int j = 0; j <= r; ++j) {
      std::vector<Scalar> d;
      for (int i = 0; i < n; ++i) d.push_back(rng.scalar(Mode::exact));
      ls.push_back(Matrix::diag(d));
    }
    std::vector<Scalar> es;
    for (int j = 0; j <= r; ++j) es.push_back(qi(2 * j + 1, j));
    auto hs = unfolded_residues(ls, es);
    Matrix sum = hs[0];
    for (size_t k = 1; k < hs.size(); ++k) sum = sum + hs[k];
    CHECK(sum == ls[0]);
  }

  // Coincident eps values are rejected.
  CHECK_THROWS_AS(
      (void)unfolded_residues({di({1, 2}), di({3, 4})}, {qi(1), qi(1)}),
      validation_error);
}

TEST_CASE("diagonal exponential") {
  Matrix lam = Matrix::diag({Scalar::floating(0.25), Scalar::floating(0.5)});
  Matrix e = diag_exp_2pi_i(lam);
  // exp(2 pi i / 4) = i, exp(pi i) = -1.
  CHECK(std::abs(e.at(0, 0).approx() - std::complex<double>(0, 1)) < 1e-12);
  CHECK(std::abs(e.at(1, 1).approx() - std::complex<double>(-1, 0)) < 1e-12);
}

TEST_CASE("parameter search is deterministic and within budget") {
  LeviChain chain = LeviChain::trivial(
      3, {Partition(3, {1, 1, 1}), Partition(3, {2, 1})});
  Matrix h = di({3, 5, 7});
  Rng a(41), b(41);
  ParameterSearch pa = search_parameters(a, chain, h, 1000);
  ParameterSearch pb = search_parameters(b, chain, h, 1000);
  REQUIRE(pa.found);
  CHECK(pa.trials == pb.trials);
  CHECK(pa.trials <= 1000);
  REQUIRE(pa.ts.size() == pb.ts.size());
  for (size_t j = 0; j < pa.ts.size(); ++j) CHECK(pa.ts[j] == pb.ts[j]);
}
