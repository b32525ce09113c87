#include "doctest.h"
#include "helpers.hpp"

using namespace th;

TEST_CASE("exact complex-rational field operations") {
  Scalar a = qs("1/3", "1/2");
  Scalar b = qi(3, 2);
  CHECK(a * b == qs("0", "13/6"));
  CHECK((a * b) / b == a);
  CHECK(a + (-a) == qi(0));
  CHECK(a * a.inv() == qi(1));
  CHECK(qi(7).div_int(2) == qs("7/2"));
  CHECK(qi(0).is_zero());
  CHECK_FALSE(a.is_zero());
  // i^2 = -1
  CHECK(qi(0, 1) * qi(0, 1) == qi(-1));
}

TEST_CASE("mode mixing is rejected") {
  Scalar e = qi(1);
  Scalar f = Scalar::floating(1.0);
  CHECK_THROWS_AS((void)(e + f), mode_error);
  CHECK_THROWS_AS((void)(e * f), mode_error);
}

TEST_CASE("float mode mirrors exact arithmetic") {
  Scalar a = Scalar::floating(0.5, 0.25);
  Scalar b = Scalar::floating(2.0, -1.0);
  CHECK(std::abs(((a * b) / b - a).approx()) < 1e-14);
  CHECK(a.to_float().mode() == Mode::floating);
  CHECK(qi(3, -4).to_float().approx() == std::complex<double>(3, -4));
}

TEST_CASE("exact rational square roots") {
  mpq_class out;
  CHECK(exact_rational_sqrt(mpq_class(4, 9), out));
  CHECK(out == mpq_class(2, 3));
  CHECK_FALSE(exact_rational_sqrt(mpq_class(2), out));
}

TEST_CASE("matrix product, inverse, determinant") {
  Matrix a = mi(2, {1, 2, 3, 4});
  Matrix b = mi(2, {0, 1, 1, 0});
  CHECK(a * b == mi(2, {2, 1, 4, 3}));
  CHECK(a.det() == qi(-2));
  CHECK(a * a.inverse() == Matrix::identity(2, Mode::exact));
  Matrix s = mi(2, {1, 2, 2, 4});
  CHECK_FALSE(s.invertible());
  CHECK_THROWS_AS((void)s.inverse(), singular_error);
}

TEST_CASE("trace form symmetry and Ad-invariance") {
  Matrix x = mi(3, {1, 2, 0, -1, 3, 1, 0, 5, 2});
  Matrix y = mi(3, {0, 1, 4, 2, 2, 0, -3, 1, 1});
  Matrix g = mi(3, {1, 1, 0, 0, 1, 2, 0, 0, 1});
  CHECK(trace_form(x, y) == trace_form(y, x));
  CHECK(trace_form(conj_by(g, x), conj_by(g, y)) == trace_form(x, y));
  CHECK(conj_by_inv(g, conj_by(g, x)) == x);
  // tr([x,y] z) = tr(x [y,z])
  Matrix z = mi(3, {2, 0, 1, 1, 1, 1, 0, 2, 0});
  CHECK(trace_form(bracket(x, y), z) == trace_form(x, bracket(y, z)));
}

TEST_CASE("characteristic polynomial of diag(1,2)") {
  auto c = char_poly(di({1, 2}));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == qi(2));
  CHECK(c[1] == qi(-3));
  CHECK(c[2] == qi(1));
}

TEST_CASE("rank, kernel, consistent solve") {
  Matrix a = mi(2, {1, 2, 2, 4});
  CHECK(rank(a) == 1);
  CHECK(kernel_basis(a).size() == 1);
  Matrix full = mi(2, {1, 1, 0, 1});
  auto x = solve_consistent(full, {qi(3), qi(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == qi(2));
  CHECK((*x)[1] == qi(1));
  // inconsistent system
  Matrix bad = mi(2, {1, 1, 1, 1});
  CHECK_FALSE(solve_consistent(bad, {qi(0), qi(1)}).has_value());
}

TEST_CASE("centralizer dimensions") {
  CHECK(centralizer_subalgebra(di({2, 1})).size() == 2);
  CHECK(centralizer_subalgebra(Matrix::identity(3, Mode::exact)).size() == 9);
  CHECK(centralizer_subalgebra(di({3, 3, 5})).size() == 5);
}

TEST_CASE("centralizer versus Levi predicates") {
  Partition pi(3, {2, 1});
  CHECK(centralizer_equals_levi(di({3, 3, 5}), pi));
  CHECK(centralizer_contained_in_levi(di({3, 3, 5}), pi));
  CHECK_FALSE(centralizer_equals_levi(di({1, 2, 3}), pi));
  CHECK(centralizer_contained_in_levi(di({1, 2, 3}), pi));
  CHECK_FALSE(centralizer_contained_in_levi(di({3, 3, 3}), pi));
}

TEST_CASE("group element caches a consistent inverse") {
  GroupElem g(mi(2, {1, 2, 0, 1}));
  CHECK(g.mat() * g.inv() == Matrix::identity(2, Mode::exact));
  CHECK((g * g.inverse()).mat().is_identity());
  CHECK_THROWS_AS(GroupElem(mi(2, {1, 2, 2, 4})), singular_error);
}

TEST_CASE("jets satisfy the product and inverse rules") {
  // d(gh) = (dg)h + g(dh), d(g^-1) = -g^-1 (dg) g^-1, checked against
  // float finite differences.
  Matrix g = mi(2, {2, 1, 1, 1}).to_float();
  Matrix h = mi(2, {1, 3, 0, 2}).to_float();
  Matrix xg = mi(2, {0, 1, -1, 2}).to_float();
  Matrix xh = mi(2, {1, 0, 2, 1}).to_float();
  Jet jg = jet_slot(g, xg);  // value g, derivative xg * g
  Jet jh = jet_slot(h, xh);
  Jet prod = jet_mul(jg, jh);
  Jet inv = jet_inv(jg);
  double t = 1e-7;
  auto step = [&](const Matrix& v, const Matrix& x) {
    Matrix id = Matrix::identity(2, Mode::floating);
    return (id + x.scaled(Scalar::floating(t))) * v;
  };
  Matrix fd_prod = (step(g, xg) * step(h, xh) - g * h)
                       .scaled(Scalar::floating(1.0 / t));
  CHECK(close(prod.der, fd_prod, 1e-5));
  Matrix fd_inv = (step(g, xg).inverse() - g.inverse())
                      .scaled(Scalar::floating(1.0 / t));
  CHECK(close(inv.der, fd_inv, 1e-5));
}

TEST_CASE("partitions and their position sets") {
  Partition pi(4, {2, 2});
  CHECK(pi.num_blocks() == 2);
  CHECK(pi.dim_levi() == 8);
  CHECK(pi.dim_unipotent() == 4);
  CHECK(pi.block_of(1) == 0);
  CHECK(pi.block_of(2) == 1);
  CHECK(pi.strict_upper_positions().size() == 4);
  CHECK(pi.lower_parabolic_positions().size() == 12);
  Matrix u = Matrix::identity(4, Mode::exact);
  u.at(0, 2) = qi(5);
  CHECK(pi.is_unipotent_upper(u));
  CHECK_FALSE(pi.is_unipotent_lower(u));
  CHECK(pi.refines(Partition::full(4)));
  CHECK_FALSE(Partition::full(4).refines(pi));
}

TEST_CASE("derived seeds are distinct per stream") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng a(derive_seed(7, 3)), b(derive_seed(7, 3));
  CHECK(a.uniform(0, 1000) == b.uniform(0, 1000));
}

TEST_CASE("random matrices respect their patterns") {
  Rng r(11);
  Partition pi(3, {2, 1});
  CHECK(pi.is_block_diagonal(random_block_diag_invertible(r, pi, Mode::exact)));
  CHECK(pi.is_strict_upper(random_strict_upper(r, pi, Mode::exact)));
  CHECK(pi.is_unipotent_lower(random_unipotent_lower(r, pi, Mode::exact)));
  CHECK(random_invertible(r, 3, Mode::exact).invertible());
}
