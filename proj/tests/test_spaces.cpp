#include "doctest.h"
#include "helpers.hpp"

using namespace th;

namespace {

Tangent tangent_for(const SpaceModel& m, std::vector<Matrix> comps) {
  Tangent t;
  t.comps = std::move(comps);
  return t;
}

Matrix e(int n, int i, int j) { return Matrix::elementary(n, Mode::exact, i, j); }

IrregularType pole_order_one() {
  IrregularType q;
  q.n = 2;
  q.mode = Mode::exact;
  q.coeffs = {di({1, -1})};
  return q;
}

}  // namespace

TEST_CASE("conjugacy class chart two-form at the base point") {
  SpaceModel m = make_conj_class(di({2, 1}));
  SpacePoint p = make_point(m, {Matrix::identity(2, Mode::exact)});
  Tangent x = tangent_for(m, {e(2, 0, 1)});
  Tangent y = tangent_for(m, {e(2, 1, 0)});
  CHECK(two_form(m, p, x, y) == qs("-3/4"));
  CHECK(two_form(m, p, y, x) == qs("3/4"));
  CHECK(two_form(m, p, x, x) == qi(0));
}

TEST_CASE("ambient class form agrees with the chart") {
  // Chart tangent xi moves the point by [x0, xi]; the ambient evaluator
  // on those image tangents must reproduce the chart value.
  Matrix x0 = di({2, 1});
  Matrix vx = x0 * e(2, 0, 1) - e(2, 0, 1) * x0;
  Matrix vy = x0 * e(2, 1, 0) - e(2, 1, 0) * x0;
  CHECK(conj_class_form_ambient(x0, vx, vy) == qs("-3/4"));
  // A non-tangential direction is rejected.
  CHECK_THROWS_AS((void)conj_class_form_ambient(x0, e(2, 0, 0), vy),
                  validation_error);
}

TEST_CASE("double two-form at the identity") {
  SpaceModel m = make_double(2);
  Matrix id = Matrix::identity(2, Mode::exact);
  SpacePoint p = make_point(m, {id, id});
  Tangent x = tangent_for(m, {e(2, 0, 0), Matrix::zeros(2, Mode::exact)});
  Tangent y = tangent_for(m, {Matrix::zeros(2, Mode::exact), e(2, 0, 0)});
  CHECK(two_form(m, p, x, y) == qi(1));
}

TEST_CASE("fission moment components") {
  SpaceModel m = make_fission(Partition(2, {1, 1}), 1);
  SpacePoint p = make_point(m, {Matrix::identity(2, Mode::exact), di({3, 5}),
                                mi(2, {1, 1, 0, 1}), mi(2, {1, 0, 1, 1})});
  auto mu = moment(m, p);
  REQUIRE(mu.size() == 2);
  CHECK(mu[0] == mi(2, {6, 3, 5, 5}));
  CHECK(mu[1] == dr({"1/3", "1/5"}));
}

TEST_CASE("point validation enforces slot shapes") {
  SpaceModel m = make_fission(Partition(2, {1, 1}), 1);
  // u slot must be unipotent upper for the partition.
  CHECK_THROWS_AS(
      (void)make_point(m, {Matrix::identity(2, Mode::exact), di({3, 5}),
                           mi(2, {1, 0, 1, 1}), mi(2, {1, 0, 1, 1})}),
      validation_error);
  // h slot must be block diagonal.
  CHECK_THROWS_AS(
      (void)make_point(m, {Matrix::identity(2, Mode::exact), mi(2, {3, 1, 0, 5}),
                           mi(2, {1, 1, 0, 1}), mi(2, {1, 0, 1, 1})}),
      validation_error);
}

TEST_CASE("stokes space moment multiplies factors in descending angle") {
  SpaceModel m = make_stokes_space(pole_order_one());
  CHECK(slot_count(m) == 4);  // C, h, S at angle 0, S at angle pi
  Matrix s0 = Matrix::identity(2, Mode::exact) + e(2, 1, 0);
  Matrix spi = Matrix::identity(2, Mode::exact) + e(2, 0, 1);
  SpacePoint p =
      make_point(m, {Matrix::identity(2, Mode::exact), di({2, 3}), s0, spi});
  auto mu = moment(m, p);
  // h S_pi S_0 = diag(2,3) [[2? ...]] — frozen product.
  CHECK(mu[0] == mi(2, {4, 2, 3, 3}));
  CHECK(mu[1] == dr({"1/2", "1/3"}));
}

TEST_CASE("mspace moment and equivalence") {
  Partition pi(2, {1, 1});
  SpaceModel m = make_mspace(pi);
  Matrix p0 = mi(2, {2, 0, 1, 1});
  SpacePoint a = make_point(m, {Matrix::identity(2, Mode::exact), p0});
  auto mu = moment(m, a);
  REQUIRE(mu.size() == 2);
  CHECK(mu[0] == p0);
  CHECK(mu[1] == dr({"1/2", "1"}));  // block-diagonal part inverted

  Matrix w = mi(2, {1, 0, 3, 1});
  SpacePoint b = make_point(m, {w * a.slots[0].mat(), w * p0 * w.inverse()});
  CHECK(mspace_equivalent(pi, a, b));
  SpacePoint c = make_point(m, {mi(2, {1, 1, 0, 1}), p0});
  CHECK_FALSE(mspace_equivalent(pi, a, c));
}

TEST_CASE("moment is equivariant under the group factors") {
  Rng rng(5);
  SpaceModel m = make_fission(Partition(3, {2, 1}), 1);
  SpacePoint p = random_point(rng, m, Mode::exact);
  auto factors = acting_factors(m);
  REQUIRE(factors.size() == 2);

  GroupElem g(random_invertible(rng, 3, Mode::exact));
  SpacePoint gp = transform_point(m, p, factors[0], g);
  auto mu = moment(m, p);
  auto gmu = moment(m, gp);
  CHECK(gmu[0] == g.mat() * mu[0] * g.inv());
  CHECK(gmu[1] == mu[1]);  // H component untouched by the G factor

  GroupElem k(random_block_diag_invertible(rng, Partition(3, {2, 1}),
                                           Mode::exact));
  SpacePoint kp = transform_point(m, p, factors[1], k);
  auto kmu = moment(m, kp);
  CHECK(kmu[0] == mu[0]);  // G component untouched by the H factor
  CHECK(kmu[1] == k.mat() * mu[1] * k.inv());
}

TEST_CASE("two-form is invariant under the group factors") {
  Rng rng(9);
  SpaceModel m = make_fission(Partition(2, {1, 1}), 1);
  SpacePoint p = random_point(rng, m, Mode::exact);
  Tangent x = random_tangent(rng, m, Mode::exact);
  Tangent y = random_tangent(rng, m, Mode::exact);
  Scalar before = two_form(m, p, x, y);
  for (const auto& f : acting_factors(m)) {
    GroupElem g = f.hfactor
                      ? GroupElem(random_block_diag_invertible(
                            rng, Partition(2, {1, 1}), Mode::exact))
                      : GroupElem(random_invertible(rng, 2, Mode::exact));
    SpacePoint gp = transform_point(m, p, f, g);
    Tangent gx = transform_tangent(m, x, f, g);
    Tangent gy = transform_tangent(m, y, f, g);
    CHECK(two_form(m, gp, gx, gy) == before);
  }
}

TEST_CASE("moment jet matches float finite differences") {
  Rng rng(21);
  SpaceModel m = make_multi_fission(
      LeviChain::trivial(2, {Partition(2, {1, 1}), Partition::full(2)}));
  SpacePoint p = random_point(rng, m, Mode::floating);
  Tangent t = random_tangent(rng, m, Mode::floating);
  Jet j = moment_g_jet(m, p, t);
  double h = 1e-7;
  std::vector<Matrix> moved;
  for (std::size_t s = 0; s < p.slots.size(); ++s) {
    Matrix idn = Matrix::identity(2, Mode::floating);
    moved.push_back((idn + t.comps[s].scaled(Scalar::floating(h))) *
                    p.slots[s].mat());
  }
  Tolerances loose;
  loose.identity = 1e-4;
  SpacePoint ph = make_point(m, moved, loose);
  Matrix fd = (moment(m, ph)[0] - j.val).scaled(Scalar::floating(1.0 / h));
  CHECK(close(fd, j.der, 1e-5));
}

TEST_CASE("qh2 residual vanishes exactly on fixed small cases") {
  Rng rng(33);
  std::vector<SpaceModel> models;
  models.push_back(make_conj_class(mi(2, {2, 1, 1, 1})));
  models.push_back(make_double(2));
  models.push_back(make_mspace(Partition(2, {1, 1})));
  models.push_back(fuse({make_double(2), make_mspace(Partition(2, {1, 1}))}));
  for (const auto& m : models) {
    SpacePoint p = random_point(rng, m, Mode::exact);
    Tangent y = random_tangent(rng, m, Mode::exact);
    for (const auto& f : acting_factors(m)) {
      Matrix xi = f.hfactor && model_name(m) == "mspace"
                      ? random_block_diag_lie(rng, Partition(2, {1, 1}),
                                              Mode::exact)
                      : random_matrix(rng, 2, Mode::exact);
      if (f.hfactor && f.path == std::vector<int>{1})
        xi = random_block_diag_lie(rng, Partition(2, {1, 1}), Mode::exact);
      CHECK(qh2_residual(m, p, f, xi, y).is_zero());
    }
  }
}

TEST_CASE("fusion moment is the ordered product of the children") {
  Rng rng(41);
  SpaceModel a = make_double(2);
  SpaceModel b = make_conj_class(mi(2, {1, 1, 1, 2}));
  SpaceModel f = fuse({a, b});
  SpacePoint p = random_point(rng, f, Mode::exact);
  SpacePoint pa{std::vector<GroupElem>(p.slots.begin(), p.slots.begin() + 2)};
  SpacePoint pb{std::vector<GroupElem>(p.slots.begin() + 2, p.slots.end())};
  CHECK(moment(f, p)[0] == moment(a, pa)[0] * moment(b, pb)[0]);
}

TEST_CASE("model names and factor names are stable") {
  CHECK(model_name(make_double(3)) == "double");
  CHECK(model_name(make_mspace(Partition(2, {1, 1}))) == "mspace");
  SpaceModel f = fuse({make_double(2), make_double(2)});
  auto factors = acting_factors(f);
  REQUIRE(factors.size() == 3);  // G plus one H per child
  CHECK_FALSE(factors[0].hfactor);
}
