#pragma once

#include <optional>
#include <vector>

#include "wcv/partition.hpp"

namespace wcv {

// Row echelon based routines over the scalar field. Exact mode pivots on
// the first nonzero entry; floating mode pivots on the largest entry and
// treats pivots below tol.pivot * scale as zero, where scale is the max
// entry magnitude of the input.
int rank(const Matrix& a, const Tolerances& tol = {});

/// Basis of { x : a x = 0 }, one vector per free column.
std::vector<std::vector<Scalar>> kernel_basis(const Matrix& a,
                                              const Tolerances& tol = {});

// Any solution of a x = b (free variables set to zero), or nullopt when
// the system is inconsistent.
std::optional<std::vector<Scalar>> solve_consistent(const Matrix& a,
                                                    const std::vector<Scalar>& b,
                                                    const Tolerances& tol = {});

// Monic characteristic polynomial det(lambda I - m); coefficient of
// lambda^k at index k, coeffs[n] = 1. Faddeev-LeVerrier, exact in exact
// mode.
std::vector<Scalar> char_poly(const Matrix& m);

// Kernel of X -> gXg^-1 - X as a list of gl_n basis elements. For GL_n
// this Lie-algebra kernel decides the group-level centralizer containment
// questions (centralizers of matrices are unit groups of subalgebras,
// hence connected).
std::vector<Matrix> centralizer_subalgebra(const Matrix& g,
                                           const Tolerances& tol = {});

bool centralizer_equals_levi(const Matrix& g, const Partition& levi,
                             const Tolerances& tol = {});
bool centralizer_contained_in_levi(const Matrix& g, const Partition& levi,
                                   const Tolerances& tol = {});
bool centralizer_equals_levi(const Matrix& g, const std::vector<int>& labels,
                             const Tolerances& tol = {});
bool centralizer_contained_in_levi(const Matrix& g,
                                   const std::vector<int>& labels,
                                   const Tolerances& tol = {});

}  // namespace wcv
