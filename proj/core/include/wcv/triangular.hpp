#pragma once

#include "wcv/matrix.hpp"
#include "wcv/partition.hpp"

namespace wcv {

// Chart data for the triangular parametrization of a conjugacy class
// through a block-diagonal base point: the class of h0 u with h in the
// H class of h0 and u unipotent upper. Requires Z_G(h0) inside the Levi
// so the parametrization is etale.
struct TriangularChart {
  Partition pi;
  GroupElem h0;

  TriangularChart(Partition p, Matrix base, const Tolerances& tol = {});
};

// The unique unipotent-upper u with (h^-1 u^-1 h) u = target, solved one
// block-superdiagonal level at a time via (id - Ad_{h^-1}) X = error.
// Requires h invertible block diagonal with no centralizer outside the
// Levi, and target unipotent upper.
Matrix solve_conj_unip(const Matrix& h, const Matrix& target,
                       const Partition& pi, const Tolerances& tol = {});

// For p block-lower-triangular whose diagonal part d has no centralizer
// outside the Levi: the unique unipotent-lower w with w^-1 p w = d.
Matrix conj_to_block_diagonal_lower(const Matrix& p, const Partition& pi,
                                    const Tolerances& tol = {});

// tau(k, u, v) = v^-1 (h u) v with h = k^-1 h0 k.
GroupElem tau(const TriangularChart& ch, const GroupElem& k,
              const GroupElem& u, const GroupElem& v);

struct TriangularTangent {
  Matrix k, u, v;  // right-logarithmic components
};

// tau*omega(X, Y) - omega_H(X, Y)
//   - 1/2 (dv v^-1, (hu)^-1 d(hu) + d(hu) (hu)^-1 + Ad_{hu} dv v^-1)(X, Y),
// where omega_H is the chart two-form of the H class of h0 in the k slot
// and tau*omega is evaluated on the ambient class through tau's jets.
// Zero in exact arithmetic.
Scalar tau_form_residual(const TriangularChart& ch, const GroupElem& k,
                         const GroupElem& u, const GroupElem& v,
                         const TriangularTangent& x, const TriangularTangent& y,
                         const Tolerances& tol = {});

}  // namespace wcv
