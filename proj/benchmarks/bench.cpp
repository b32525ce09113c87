#include <benchmark/benchmark.h>

#include "wcv/curve.hpp"
#include "wcv/linalg.hpp"

namespace {

using namespace wcv;

// Seeded two-level rank-3 unfolding instance with admissible parameters.
struct UnfoldFixture {
  SpaceModel model;
  SpacePoint point;
  UnfoldingParams params;

  static const UnfoldFixture& get() {
    static UnfoldFixture f = [] {
      for (std::uint64_t seed = 1;; ++seed) {
        Rng rng(seed);
        LeviChain chain = random_levi_chain(rng, 3, 2);
        SpaceModel model = make_multi_fission(chain);
        SpacePoint p = random_point(rng, model, Mode::exact);
        ParameterSearch ps =
            search_parameters(rng, chain, p.slots[1].mat(), 1000);
        if (ps.found)
          return UnfoldFixture{std::move(model), std::move(p),
                               UnfoldingParams{chain, ps.ts}};
      }
    }();
    return f;
  }
};

void bm_exact_multiply(benchmark::State& state) {
  Rng rng(7);
  Matrix a = random_matrix(rng, 4, Mode::exact);
  Matrix b = random_matrix(rng, 4, Mode::exact);
  for (auto _ : state) {
    Matrix c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_exact_multiply);

void bm_exact_inverse(benchmark::State& state) {
  Rng rng(7);
  Matrix a = random_invertible(rng, 4, Mode::exact);
  for (auto _ : state) {
    Matrix inv = a.inverse();
    benchmark::DoNotOptimize(inv);
  }
}
BENCHMARK(bm_exact_inverse);

void bm_fission_two_form(benchmark::State& state) {
  Rng rng(11);
  SpaceModel model = make_fission(Partition(3, {2, 1}), 2);
  SpacePoint p = random_point(rng, model, Mode::exact);
  Tangent x = random_tangent(rng, model, Mode::exact);
  Tangent y = random_tangent(rng, model, Mode::exact);
  for (auto _ : state) {
    Scalar w = two_form(model, p, x, y);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(bm_fission_two_form);

void bm_stokes_qh2_residual(benchmark::State& state) {
  Rng rng(13);
  IrregularType q{3, Mode::floating,
                  {Matrix::diag({Scalar::floating(1.0), Scalar::floating(2.0),
                                 Scalar::floating(-1.0)})}};
  SpaceModel model = make_stokes_space(q);
  SpacePoint p = random_point(rng, model, Mode::floating);
  ActingFactor f = acting_factors(model)[1];
  Matrix xi = random_label_block_diag_lie(
      rng, std::get<StokesSpaceModel>(model.v).levi_labels, Mode::floating);
  Tangent y = random_tangent(rng, model, Mode::floating);
  for (auto _ : state) {
    Scalar r = qh2_residual(model, p, f, xi, y);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_stokes_qh2_residual);

void bm_solve_conj_unip(benchmark::State& state) {
  Rng rng(17);
  Partition pi(4, {2, 1, 1});
  Matrix h = Matrix::diag({Scalar::exact_int(2), Scalar::exact_int(2),
                           Scalar::exact_int(3), Scalar::exact_int(5)});
  Matrix u = random_unipotent_upper(rng, pi, Mode::exact);
  Matrix target = h.inverse() * u.inverse() * h * u;
  for (auto _ : state) {
    Matrix solved = solve_conj_unip(h, target, pi);
    benchmark::DoNotOptimize(solved);
  }
}
BENCHMARK(bm_solve_conj_unip);

void bm_unfold_full(benchmark::State& state) {
  const UnfoldFixture& f = UnfoldFixture::get();
  for (auto _ : state) {
    UnfoldResult r = unfold_full(f.params, f.point);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_unfold_full);

void bm_etale_rank_check(benchmark::State& state) {
  const UnfoldFixture& f = UnfoldFixture::get();
  for (auto _ : state) {
    EtaleReport r = etale_rank_check(f.params, f.point);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_etale_rank_check);

}  // namespace

BENCHMARK_MAIN();
