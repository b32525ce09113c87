#include "doctest.h"
#include "helpers.hpp"

using namespace th;

TEST_CASE("conjugation solve recovers the worked unipotent") {
  // (h^-1 u^-1 h) u = [[1,1],[0,1]] with h = diag(2,1) has the unique
  // solution u = [[1,2],[0,1]].
  Matrix h = di({2, 1});
  Matrix target = mi(2, {1, 1, 0, 1});
  Matrix u = solve_conj_unip(h, target, Partition(2, {1, 1}));
  CHECK(u == mi(2, {1, 2, 0, 1}));
  CHECK(h.inverse() * u.inverse() * h * u == target);
}

TEST_CASE("conjugation solve round trip on three blocks") {
  Partition pi(3, {1, 1, 1});
  Matrix h = di({2, 3, 7});
  Rng rng(17);
  for (int k = 0; k < 5; ++k) {
    Matrix u = random_unipotent_upper(rng, pi, Mode::exact);
    Matrix target = h.inverse() * u.inverse() * h * u;
    CHECK(solve_conj_unip(h, target, pi) == u);
  }
}

TEST_CASE("conjugation solve round trip with a nontrivial block") {
  Partition pi(3, {2, 1});
  Matrix h = mi(3, {2, 1, 0, 0, 2, 0, 0, 0, 5});  // block Jordan-ish Levi part
  REQUIRE(centralizer_contained_in_levi(h, pi));
  Rng rng(23);
  Matrix u = random_unipotent_upper(rng, pi, Mode::exact);
  Matrix target = h.inverse() * u.inverse() * h * u;
  CHECK(solve_conj_unip(h, target, pi) == u);
}

TEST_CASE("conjugation solve rejects degenerate h") {
  Partition pi(2, {1, 1});
  Matrix target = mi(2, {1, 1, 0, 1});
  // Z(I) meets the unipotent radical, so the level system is singular.
  CHECK_THROWS_AS((void)solve_conj_unip(Matrix::identity(2, Mode::exact),
                                        target, pi),
                  singular_error);
}

TEST_CASE("lower parabolic conjugates to its diagonal part") {
  Partition pi(2, {1, 1});
  Matrix p = mi(2, {2, 0, 1, 1});
  Matrix w = conj_to_block_diagonal_lower(p, pi);
  CHECK(w == mi(2, {1, 0, 1, 1}));
  CHECK(w.inverse() * p * w == di({2, 1}));

  Partition pi3(3, {2, 1});
  Rng rng(31);
  Matrix d = di({3, 3, 5});
  Matrix q = d + random_strict_lower(rng, pi3, Mode::exact);
  Matrix w3 = conj_to_block_diagonal_lower(q, pi3);
  CHECK(pi3.is_unipotent_lower(w3));
  CHECK(w3.inverse() * q * w3 == d);
}

TEST_CASE("triangular chart rejects a central base point") {
  CHECK_THROWS_AS(TriangularChart(Partition(2, {1, 1}),
                                  Matrix::identity(2, Mode::exact)),
                  validation_error);
  TriangularChart ok(Partition(2, {1, 1}), di({2, 1}));
  CHECK(ok.h0.mat() == di({2, 1}));
}

TEST_CASE("tau products") {
  TriangularChart ch(Partition(2, {1, 1}), di({2, 1}));
  GroupElem id(Matrix::identity(2, Mode::exact));
  GroupElem u(mi(2, {1, 1, 0, 1}));
  GroupElem v(mi(2, {1, 0, 1, 1}));
  CHECK(tau(ch, id, u, id).mat() == mi(2, {2, 2, 0, 1}));
  CHECK(tau(ch, id, id, v).mat() == mi(2, {2, 0, -1, 1}));
  // tau lands in the class of h0 u: same characteristic polynomial.
  auto c1 = char_poly(tau(ch, id, u, v).mat());
  auto c2 = char_poly(ch.h0.mat() * u.mat());
  CHECK(c1[0] == c2[0]);
  CHECK(c1[1] == c2[1]);
}

TEST_CASE("tau two-form identity vanishes exactly") {
  Partition pi(3, {2, 1});
  Matrix h0 = di({2, 2, 5});
  TriangularChart ch(pi, h0);
  Rng rng(47);
  for (int k = 0; k < 3; ++k) {
    GroupElem kk(random_block_diag_invertible(rng, pi, Mode::exact));
    GroupElem u(random_unipotent_upper(rng, pi, Mode::exact));
    GroupElem v(random_invertible(rng, 3, Mode::exact));
    TriangularTangent x{random_block_diag_lie(rng, pi, Mode::exact),
                        random_strict_upper(rng, pi, Mode::exact),
                        random_matrix(rng, 3, Mode::exact)};
    TriangularTangent y{random_block_diag_lie(rng, pi, Mode::exact),
                        random_strict_upper(rng, pi, Mode::exact),
                        random_matrix(rng, 3, Mode::exact)};
    CHECK(tau_form_residual(ch, kk, u, v, x, y).is_zero());
  }
}

TEST_CASE("tau two-form identity in floating mode") {
  Partition pi(2, {1, 1});
  TriangularChart ch(pi, di({2, 1}).to_float());
  Rng rng(53);
  GroupElem kk(random_block_diag_invertible(rng, pi, Mode::floating));
  GroupElem u(random_unipotent_upper(rng, pi, Mode::floating));
  GroupElem v(random_invertible(rng, 2, Mode::floating));
  TriangularTangent x{random_block_diag_lie(rng, pi, Mode::floating),
                      random_strict_upper(rng, pi, Mode::floating),
                      random_matrix(rng, 2, Mode::floating)};
  TriangularTangent y{random_block_diag_lie(rng, pi, Mode::floating),
                      random_strict_upper(rng, pi, Mode::floating),
                      random_matrix(rng, 2, Mode::floating)};
  CHECK(std::abs(tau_form_residual(ch, kk, u, v, x, y).approx()) < 1e-9);
}
