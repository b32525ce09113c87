#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace th;

namespace {

IrregularType type_of(const std::vector<Matrix>& coeffs) {
  IrregularType q;
  q.n = coeffs.front().n();
  q.mode = coeffs.front().mode();
  q.coeffs = coeffs;
  q.validate();
  return q;
}

constexpr double kPi = 3.14159265358979323846;

bool has_angle(const std::vector<SingularDirection>& dirs, double a) {
  for (const auto& d : dirs)
    if (std::abs(d.angle - a) < 1e-9) return true;
  return false;
}

const SingularDirection& at_angle(const std::vector<SingularDirection>& dirs,
                                  double a) {
  for (const auto& d : dirs)
    if (std::abs(d.angle - a) < 1e-9) return d;
  throw std::runtime_error("direction not found");
}

}  // namespace

TEST_CASE("q_alpha coefficients and degree") {
  // Q = diag(1,0) z^-1 + diag(i,-i) z^-2: q for the root e_1 - e_2 has
  // coefficient list [1, 2i].
  IrregularType q = type_of({di({1, 0}), Matrix::diag({qi(0, 1), qi(0, -1)})});
  auto c = q_alpha(q, 0, 1);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == qi(1));
  CHECK(c[1] == qi(0, 2));
  CHECK(q_alpha_degree(q, 0, 1) == 2);
  CHECK(q_alpha_degree(q, 1, 0) == 2);
  CHECK(q_alpha_degree(q, 0, 0) == 0);
}

TEST_CASE("singular directions of diag(1,-1) z^-1") {
  IrregularType q = type_of({di({1, -1})});
  auto dirs = singular_directions(q);
  REQUIRE(dirs.size() == 2);
  // 2 e^{-id} < 0 at d = pi for e_1 - e_2; -2 e^{-id} < 0 at d = 0.
  CHECK(has_angle(dirs, 0.0));
  CHECK(has_angle(dirs, kPi));
  const auto& d0 = at_angle(dirs, 0.0);
  REQUIRE(d0.roots.size() == 1);
  CHECK(d0.roots[0] == std::pair<int, int>(1, 0));
  REQUIRE(d0.unit.has_value());
  CHECK(*d0.unit == qi(1));
  const auto& dpi = at_angle(dirs, kPi);
  CHECK(dpi.roots[0] == std::pair<int, int>(0, 1));
  REQUIRE(dpi.unit.has_value());
  CHECK(*dpi.unit == qi(-1));
}

TEST_CASE("singular directions of diag(i,-i) z^-1") {
  IrregularType q = type_of({Matrix::diag({qi(0, 1), qi(0, -1)})});
  auto dirs = singular_directions(q);
  REQUIRE(dirs.size() == 2);
  CHECK(has_angle(dirs, kPi / 2));
  CHECK(has_angle(dirs, 3 * kPi / 2));
  CHECK(at_angle(dirs, kPi / 2).roots[0] == std::pair<int, int>(1, 0));
  CHECK(at_angle(dirs, 3 * kPi / 2).roots[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("order two: four directions, each root supports a pair") {
  IrregularType q = type_of({Matrix::zeros(2, Mode::exact), di({1, -1})});
  auto dirs = singular_directions(q);
  REQUIRE(dirs.size() == 4);
  for (double a : {0.0, kPi / 2, kPi, 3 * kPi / 2}) CHECK(has_angle(dirs, a));
  // Even leading order: a root supports d and d + pi itself.
  CHECK(at_angle(dirs, 0.0).roots[0] == std::pair<int, int>(1, 0));
  CHECK(at_angle(dirs, kPi).roots[0] == std::pair<int, int>(1, 0));
  CHECK(at_angle(dirs, kPi / 2).roots[0] == std::pair<int, int>(0, 1));
  CHECK(at_angle(dirs, 3 * kPi / 2).roots[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("stokes group basis") {
  IrregularType q = type_of({di({1, -1})});
  auto basis = stokes_group_basis(q, 0.0);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == Matrix::elementary(2, Mode::exact, 1, 0));
  CHECK(stokes_group_basis(q, kPi).size() == 1);
  CHECK_THROWS_AS((void)stokes_group_basis(q, 1.0), validation_error);
}

TEST_CASE("centralizer labels and chain of a two-level type") {
  // Q_1 = diag(1,2,1), Q_2 = diag(5,5,7): Z(Q_2) = gl_2 x gl_1, the
  // joint centralizer is the diagonal torus.
  IrregularType q = type_of({di({1, 2, 1}), di({5, 5, 7})});
  auto l1 = centralizer_labels(q, 1);
  CHECK(l1 == std::vector<int>{0, 1, 2});
  auto l2 = centralizer_labels(q, 2);
  CHECK(l2 == std::vector<int>{0, 0, 1});
  LeviChain chain = levi_chain(q);
  REQUIRE(chain.depth() == 2);
  CHECK(chain.pi(1).num_blocks() == 3);
  CHECK(chain.pi(2).num_blocks() == 2);
  CHECK(chain.pi(1).refines(chain.pi(2)));
  // sigma must make both levels intervals; identity works here.
  chain.validate();
}

TEST_CASE("interval form for a non-interval centralizer pattern") {
  // Q_1 = diag(3,4,3): the level pattern {1,3}{2} is not an interval
  // partition; levi_chain must reorder coordinates.
  IrregularType q = type_of({di({3, 4, 3})});
  LeviChain chain = levi_chain(q);
  REQUIRE(chain.depth() == 1);
  CHECK(chain.pi(1).num_blocks() == 2);
  std::vector<int> sizes = chain.pi(1).sizes();
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>{1, 2});
  chain.validate();
}

TEST_CASE("dimension audit identity on worked types") {
  IrregularType a = type_of({Matrix::zeros(2, Mode::exact), di({1, -1})});
  auto audit = dimension_audit(a);
  CHECK(audit.sum_stokes == 4);
  CHECK(audit.sum_degrees == 4);
  CHECK(audit.sum_unipotent == 4);

  IrregularType b = type_of({di({1, 2, 1}), di({5, 5, 7})});
  auto ab = dimension_audit(b);
  CHECK(ab.sum_stokes == ab.sum_degrees);
  CHECK(ab.sum_degrees == ab.sum_unipotent);
}

TEST_CASE("type validation rejects bad data") {
  IrregularType q;
  q.n = 2;
  q.mode = Mode::exact;
  q.coeffs = {Matrix::zeros(2, Mode::exact)};
  CHECK_THROWS_AS(q.validate(), validation_error);  // zero leading term
  Matrix nondiag = Matrix::zeros(2, Mode::exact);
  nondiag.at(0, 1) = qi(1);
  q.coeffs = {nondiag};
  CHECK_THROWS_AS(q.validate(), validation_error);
}

TEST_CASE("tame type has no directions and the full chain") {
  IrregularType q;
  q.n = 3;
  q.mode = Mode::exact;
  CHECK(singular_directions(q).empty());
  LeviChain chain = levi_chain(q);
  CHECK(chain.depth() == 1);
  CHECK(chain.pi(1).num_blocks() == 1);
}
