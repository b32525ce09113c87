#pragma once

#include "wcv/spaces.hpp"
#include "wcv/triangular.hpp"

namespace wcv {

// Unfolding parameters for a parabolic chain pi_1 <= .. <= pi_r: one
// invertible diagonal t_j per level, scalar on each pi_j block.
struct UnfoldingParams {
  LeviChain chain;
  std::vector<Matrix> ts;

  int r() const { return int(ts.size()); }
  void validate(const Tolerances& tol = {}) const;
};

SpaceModel source_model(const UnfoldingParams& up);  // multi_fission(chain)

// t_j regular in the center of L_j (Z(t_j) = L_j) for every level, and
// Z(h (t_1..t_r)^-1) inside L_1.
bool parameter_conditions_hold(const UnfoldingParams& up, const Matrix& h,
                               const Tolerances& tol = {});

// Image of an unfolding: a lower-parabolic pair (C, p) representing a
// tame mspace class for pi_1, and one conjugacy-class element per level.
struct UnfoldResult {
  GroupElem c;
  GroupElem p;
  std::vector<GroupElem> ms;
};

// Right-logarithmic tangents of an image.
struct UnfoldTangent {
  Matrix c, p;
  std::vector<Matrix> ms;
};

// One level, r = 1: (C, h, u, v) -> ((C, h t^-1 v), C^-1 v^-1 t u v C).
UnfoldResult unfold_rank1(const UnfoldingParams& up, const SpacePoint& p);

// One level off the deep end, r >= 2: produces depth r-1 data plus the
// class element of the removed level.
struct StepResult {
  UnfoldingParams params;
  SpacePoint point;
  GroupElem m;
};
StepResult unfold_step(const UnfoldingParams& up, const SpacePoint& p);

// All levels at once:
//   v_i(+/-) = (t_{i+1}..t_r) u_i(+/-) (t_{i+1}..t_r)^-1,
//   p = h (t_1..t_r)^-1 v_1^- .. v_r^-,
//   M_i = C^-1 (v_i^- .. v_r^-)^-1 t_i v_i^+ (v_i^- .. v_r^-) C.
UnfoldResult unfold_full(const UnfoldingParams& up, const SpacePoint& p);

// Differential of unfold_full at p along a source tangent.
UnfoldTangent unfold_differential(const UnfoldingParams& up, const SpacePoint& p,
                                  const Tangent& t);

// Target G moment (C^-1 p C) M_1 .. M_r minus the source G moment, and
// target H moment minus (t_1..t_r) h^-1. Both vanish identically.
struct MomentIntertwine {
  Matrix g_residual;
  Matrix h_residual;
};
MomentIntertwine moment_intertwine_residual(const UnfoldingParams& up,
                                            const SpacePoint& p,
                                            const Tolerances& tol = {});

// Two-form of mspace(pi_1) fused with the classes through the ms values,
// on right-logarithmic image tangents; class factors are evaluated
// ambiently, fusion corrections use the moment jets.
Scalar unfolded_two_form(const Partition& pi1, const UnfoldResult& res,
                         const UnfoldTangent& x, const UnfoldTangent& y,
                         const Tolerances& tol = {});

// omega_source(X, Y) - omega_target(dU X, dU Y); zero identically.
Scalar form_intertwine_residual(const UnfoldingParams& up, const SpacePoint& p,
                                const Tangent& x, const Tangent& y,
                                const Tolerances& tol = {});

// Injectivity of the differential into the U_1^- quotient: the joint
// kernel of dU(X) = (orbit tangent of w) over (X, w). target_dim is the
// quotient dimension of the constrained target ((C, p) modulo U_1^-,
// classes counted through their computed centralizers); it equals
// source_dim whenever the class elements are regular for their level,
// and then trivial kernel certifies the map is etale at the point.
struct EtaleReport {
  bool full_rank = false;
  int kernel_dim = 0;
  int source_dim = 0;
  int target_dim = 0;
};
EtaleReport etale_rank_check(const UnfoldingParams& up, const SpacePoint& p,
                             const Tolerances& tol = {});

// Residues after unfolding: given Lambda_0..Lambda_r and pairwise
// distinct eps_0..eps_r,
//   hat Lambda_i = sum_{j >= i} Lambda_j prod_{0 <= l <= j, l != i}
//                  (eps_i - eps_l)^-1,
// with sum_i hat Lambda_i = Lambda_0.
std::vector<Matrix> unfolded_residues(const std::vector<Matrix>& lambdas,
                                      const std::vector<Scalar>& eps);

// Entrywise exp(2 pi i .) of a diagonal floating-mode matrix.
Matrix diag_exp_2pi_i(const Matrix& lambda);

// Rejection-samples block-scalar parameters from a small rational pool
// until parameter_conditions_hold against h; deterministic under the
// generator's seed.
struct ParameterSearch {
  bool found = false;
  std::vector<Matrix> ts;
  int trials = 0;
};
ParameterSearch search_parameters(Rng& rng, const LeviChain& chain,
                                  const Matrix& h, int max_trials = 1000,
                                  const Tolerances& tol = {});

}  // namespace wcv
