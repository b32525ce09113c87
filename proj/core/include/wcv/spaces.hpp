#pragma once

#include <optional>
#include <variant>

#include "wcv/irregular.hpp"
#include "wcv/random.hpp"

namespace wcv {

// Chart models of the quasi-Hamiltonian building blocks. Points are slot
// tuples of invertible matrices; all tangent data is carried in
// right-logarithmic form (a slot moving along g(t) with g(0) = g has
// tangent component xi = g'(0) g^-1).
//
// conj_class(x0):   slot (C), the point of the class being C^-1 x0 C.
// double:           slots (C, h), moment (C^-1 h C, h^-1).
// fission:          slots (C, h, u_1..u_2r), u_odd in U+, u_even in U-,
//                   moment (C^-1 h u_1 u_2 .. u_2r C, h^-1).
// multi_fission:    same slots, u_{2j-1} in U_j^+, u_{2j} in U_j^- for a
//                   parabolic chain P_1 <= .. <= P_r.
// stokes_space:     slots (C, h, S_1..S_s) indexed by the singular
//                   directions in ascending order, moment
//                   (C^-1 h S_s .. S_2 S_1 C, h^-1).
// mspace:           slots (C, p) with p in the lower parabolic P^-,
//                   representing the class [C, p] modulo U^-;
//                   moment (C^-1 p C, varpi(p)^-1).
// fusion:           concatenation of children; G moments multiply
//                   left-to-right in child order.

struct SpaceModel;

struct ConjClassModel {
  Matrix base;  // x0, invertible
};
struct DoubleModel {
  int n = 0;
};
struct FissionModel {
  Partition pi;
  int r = 1;
};
struct MultiFissionModel {
  LeviChain chain;
};
struct StokesSpaceModel {
  IrregularType type;
  std::vector<SingularDirection> dirs;  // ascending angle
  std::vector<int> levi_labels;         // equality pattern of Z_G(Q)
};
struct MSpaceModel {
  Partition pi;
};
struct FusionModel {
  std::vector<SpaceModel> children;
};

struct SpaceModel {
  std::variant<ConjClassModel, DoubleModel, FissionModel, MultiFissionModel,
               StokesSpaceModel, MSpaceModel, FusionModel>
      v;
};

SpaceModel make_conj_class(Matrix x0);
SpaceModel make_double(int n);
SpaceModel make_fission(Partition pi, int r);
SpaceModel make_multi_fission(LeviChain chain);
SpaceModel make_stokes_space(IrregularType q);
SpaceModel make_mspace(Partition pi);
SpaceModel fuse(std::vector<SpaceModel> children);

int model_n(const SpaceModel& m);
std::optional<Mode> model_mode(const SpaceModel& m);
std::string model_name(const SpaceModel& m);

struct SpacePoint {
  std::vector<GroupElem> slots;
};

struct Tangent {
  std::vector<Matrix> comps;
};

// Tangent-space slot patterns: entry positions allowed to be nonzero in
// each slot's right-logarithmic tangent component.
std::vector<std::vector<std::pair<int, int>>> tangent_positions(
    const SpaceModel& m);

int slot_count(const SpaceModel& m);
void validate_point(const SpaceModel& m, const SpacePoint& p,
                    const Tolerances& tol = {});
void validate_tangent(const SpaceModel& m, const SpacePoint& p,
                      const Tangent& t, const Tolerances& tol = {});
SpacePoint make_point(const SpaceModel& m, const std::vector<Matrix>& slots,
                      const Tolerances& tol = {});

// Moment components: G part first, then the H parts of each factor with a
// torus/Levi action, in slot order (fusion concatenates child H parts).
std::vector<Matrix> moment(const SpaceModel& m, const SpacePoint& p);

// Value and directional derivative of the G moment along a tangent.
Jet moment_g_jet(const SpaceModel& m, const SpacePoint& p, const Tangent& t);

// The two-form evaluated on two tangents. Stored normalization: this is
// omega with d omega = 0 and the moment condition
// omega(xi_M, .) = 1/2 ((mu^-1 dmu + dmu mu^-1), xi); the chart formulas
// below are halves of the customary doubled expressions.
Scalar two_form(const SpaceModel& m, const SpacePoint& p, const Tangent& x,
                const Tangent& y);

// An acting factor: the diagonal G (path empty, hfactor false) or the
// H factor of the leaf model reached by path through fusion children.
struct ActingFactor {
  std::vector<int> path;
  bool hfactor = false;
};

std::vector<ActingFactor> acting_factors(const SpaceModel& m);
std::string factor_name(const ActingFactor& f);
void validate_acting_lie(const SpaceModel& m, const ActingFactor& f,
                         const Matrix& xi);

// Infinitesimal action: derivative at t = 0 of e^{-t xi} acting on the
// point, slotwise in right-logarithmic form.
Tangent fundamental_tangent(const SpaceModel& m, const SpacePoint& p,
                            const ActingFactor& f, const Matrix& xi);

// Jet of the acting factor's moment component along a tangent.
Jet moment_factor_jet(const SpaceModel& m, const SpacePoint& p,
                      const Tangent& t, const ActingFactor& f);

// omega(xi_M, y) - 1/2 ((mu^-1 dmu + dmu mu^-1)(y), xi). Zero on the nose
// in exact mode; this equality pins every sign and normalization choice.
Scalar qh2_residual(const SpaceModel& m, const SpacePoint& p,
                    const ActingFactor& f, const Matrix& xi, const Tangent& y);

// Group action of an element g of the factor on points and (right-log)
// tangents; moments transform by conjugation in the factor.
SpacePoint transform_point(const SpaceModel& m, const SpacePoint& p,
                           const ActingFactor& f, const GroupElem& g);
Tangent transform_tangent(const SpaceModel& m, const Tangent& t,
                          const ActingFactor& f, const GroupElem& g);

// U^- equivalence of mspace representatives: (C', p') = (wC, w p w^-1)
// for some unipotent lower w.
bool mspace_equivalent(const Partition& pi, const SpacePoint& a,
                       const SpacePoint& b, const Tolerances& tol = {});

// Two-form of a conjugacy class at the actual point x on ambient tangent
// matrices v, w (solving x zeta - zeta x = v for the fundamental-field
// parameters; the value does not depend on the choices).
Scalar conj_class_form_ambient(const Matrix& x, const Matrix& v,
                               const Matrix& w, const Tolerances& tol = {});

SpacePoint random_point(Rng& r, const SpaceModel& m, Mode mode);
Tangent random_tangent(Rng& r, const SpaceModel& m, Mode mode);

}  // namespace wcv
