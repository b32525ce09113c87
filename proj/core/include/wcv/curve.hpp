#pragma once

#include "wcv/unfolding.hpp"

namespace wcv {

// A marked point carries a diagonal irregular type (depth 0 = tame) and
// a choice of chart for the word slots: fission pairs in the interval
// coordinates of the type's chain, or Stokes factors on the singular
// directions.
enum class TailKind { fission, stokes };

struct MarkedPoint {
  IrregularType type;
  TailKind tail = TailKind::fission;
};

SpaceModel point_model(const MarkedPoint& mp);

// Chart slots of one marked point inside a representation:
// C, h, then the word slots.
struct MarkedSlot {
  GroupElem c, h;
  std::vector<GroupElem> tail;
};

SpacePoint slot_point(const MarkedSlot& s);

struct CurveData {
  int genus = 0;
  int n = 0;
  Mode mode = Mode::exact;
  std::vector<MarkedPoint> points;

  void validate() const;
};

struct RepPoint {
  std::vector<std::pair<GroupElem, GroupElem>> handles;  // (A_l, B_l)
  std::vector<MarkedSlot> marked;
};

void validate_rep_point(const CurveData& curve, const RepPoint& rp,
                        const Tolerances& tol = {});

// The local factor of point i in the relation: C^-1 h w_1 .. w_N C.
Matrix marked_factor(const CurveData& curve, const RepPoint& rp, int i);

// prod_l A_l B_l A_l^-1 B_l^-1 prod_i (local factors) - I.
Matrix moment_relation_residual(const CurveData& curve, const RepPoint& rp);

// prod_i det(h_i) - 1; forced by the relation, so zero on the fiber.
Scalar det_condition_residual(const CurveData& curve, const RepPoint& rp,
                              const Tolerances& tol = {});

// Fills the final marked slot (which must be tame) as (I, P^-1) where P
// is the product of all other factors, closing the relation.
RepPoint complete_relation(const CurveData& curve, RepPoint partial,
                           const Tolerances& tol = {});

// Irreducibility of the representation together with its torus data:
// saturates the span of words in { A_l, B_l, C_i^-1 h_i C_i,
// C_i^-1 w C_i, C_i^-1 z C_i } (w the word slots, z the block-scalar
// basis of the point's Levi) and tests whether it is all of gl_n.
struct StabilityReport {
  bool stable = false;
  int algebra_dim = 0;
};
StabilityReport stability_check(const CurveData& curve, const RepPoint& rp,
                                const Tolerances& tol = {});

// Replaces each irregular point by its unfolding: a tame slot (C, p)
// followed by tame slots (I, M_j), preserving the relation on the nose.
// params[i] must be given exactly for the fission points of depth >= 1.
struct UnfoldedCurve {
  CurveData curve;
  RepPoint rep;
};
UnfoldedCurve unfold_wcv(const CurveData& curve, const RepPoint& rp,
                         const std::vector<std::optional<UnfoldingParams>>& params,
                         const Tolerances& tol = {});

// Random representation on the relation fiber: all handles and marked
// slots random, the final (tame) point completed from the relation.
RepPoint random_rep_point(Rng& rng, const CurveData& curve,
                          const Tolerances& tol = {});

}  // namespace wcv
