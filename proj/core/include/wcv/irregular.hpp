#pragma once

#include <optional>
#include <utility>

#include "wcv/linalg.hpp"

namespace wcv {

// Diagonal irregular type Q(z) = Q_1 z^-1 + ... + Q_r z^-r. Coefficients
// are stored as diagonal matrices, coeffs[j-1] = Q_j. r = 0 (no
// coefficients) is the tame case.
struct IrregularType {
  int n = 0;
  Mode mode = Mode::exact;
  std::vector<Matrix> coeffs;

  int depth() const { return int(coeffs.size()); }
  void validate() const;
  Scalar coeff(int j, int k) const;  // (Q_j)_kk, j 1-based
};

// One anti-Stokes ray. angle is canonical in [0, 2pi); unit carries
// e^{-i*angle} exactly when that lies in the Gaussian rationals (only
// guaranteed detectable for roots of leading order 1). roots lists the
// supporting pairs (k, l), 0-based, meaning the root e_k - e_l.
struct SingularDirection {
  double angle = 0.0;
  std::optional<Scalar> unit;
  std::vector<std::pair<int, int>> roots;
};

// Coefficient list of q_alpha = <alpha, Q> for alpha = e_k - e_l,
// index j-1 holds (Q_j)_kk - (Q_j)_ll.
std::vector<Scalar> q_alpha(const IrregularType& q, int k, int l);

// Largest j with nonzero coefficient, 0 when q_alpha vanishes.
int q_alpha_degree(const IrregularType& q, int k, int l);

// All singular directions: d with leading_coeff(q_alpha) * e^{-i k d}
// negative real for some root alpha of leading order k. Sorted by angle;
// directions supported by several roots are merged.
std::vector<SingularDirection> singular_directions(const IrregularType& q);

// Basis {E_kl : (k,l) supports d} of the Stokes group's Lie algebra at
// direction d (matched against the computed directions within tol).
// Verifies nilpotency via acyclicity of the support digraph.
std::vector<Matrix> stokes_group_basis(const IrregularType& q, double d,
                                       double tol = 1e-9);

// Equality-pattern labels of the simultaneous centralizer of Q_j..Q_r
// (unsorted coordinates).
std::vector<int> centralizer_labels(const IrregularType& q, int from_j);

// Chain H_1 <= ... <= H_r of centralizers Z(Q_j,..,Q_r) in interval form:
// sigma sorts the indices so that every level is an interval partition
// simultaneously. For r = 0 returns the one-level full chain.
LeviChain levi_chain(const IrregularType& q);

struct DimensionAudit {
  int sum_stokes = 0;     // sum over directions of dim Sto_d
  int sum_degrees = 0;    // sum over roots of deg q_alpha
  int sum_unipotent = 0;  // sum over chain levels of dim U_j^+ + dim U_j^-
};

DimensionAudit dimension_audit(const IrregularType& q);

}  // namespace wcv
