#include "wcv/spaces.hpp"

#include <algorithm>
#include <functional>

#include "wcv/linalg.hpp"

namespace wcv {

namespace {

// Per-slot shape of the chart: which subgroup the slot ranges over.
struct SlotSpec {
  enum class Kind {
    group,            // all of GL_n
    levi,             // invertible block diagonal for pi
    levi_labels,      // invertible, block pattern of an equality labeling
    unip_upper,       // I + strictly block-upper for pi
    unip_lower,       // I + strictly block-lower for pi
    lower_parabolic,  // invertible block-lower-triangular for pi
    support,          // I + entries on a fixed position set
  };
  Kind kind = Kind::group;
  Partition pi;
  std::vector<int> labels;
  std::vector<std::pair<int, int>> positions;
};

void append_specs(const SpaceModel& m, std::vector<SlotSpec>& out) {
  std::visit(
      [&](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConjClassModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
        } else if constexpr (std::is_same_v<T, DoubleModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
        } else if constexpr (std::is_same_v<T, FissionModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
          out.push_back({SlotSpec::Kind::levi, mm.pi, {}, {}});
          for (int j = 0; j < mm.r; ++j) {
            out.push_back({SlotSpec::Kind::unip_upper, mm.pi, {}, {}});
            out.push_back({SlotSpec::Kind::unip_lower, mm.pi, {}, {}});
          }
        } else if constexpr (std::is_same_v<T, MultiFissionModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
          out.push_back({SlotSpec::Kind::levi, mm.chain.pi(1), {}, {}});
          for (int j = 1; j <= mm.chain.depth(); ++j) {
            out.push_back({SlotSpec::Kind::unip_upper, mm.chain.pi(j), {}, {}});
            out.push_back({SlotSpec::Kind::unip_lower, mm.chain.pi(j), {}, {}});
          }
        } else if constexpr (std::is_same_v<T, StokesSpaceModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
          out.push_back({SlotSpec::Kind::levi_labels, {}, mm.levi_labels, {}});
          for (const auto& d : mm.dirs)
            out.push_back({SlotSpec::Kind::support, {}, {}, d.roots});
        } else if constexpr (std::is_same_v<T, MSpaceModel>) {
          out.push_back({SlotSpec::Kind::group, {}, {}, {}});
          out.push_back({SlotSpec::Kind::lower_parabolic, mm.pi, {}, {}});
        } else if constexpr (std::is_same_v<T, FusionModel>) {
          for (const auto& c : mm.children) append_specs(c, out);
        }
      },
      m.v);
}

std::vector<SlotSpec> slot_specs(const SpaceModel& m) {
  std::vector<SlotSpec> out;
  append_specs(m, out);
  return out;
}

std::vector<std::pair<int, int>> spec_positions(const SlotSpec& s, int n) {
  switch (s.kind) {
    case SlotSpec::Kind::group: {
      std::vector<std::pair<int, int>> all;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) all.push_back({i, j});
      return all;
    }
    case SlotSpec::Kind::levi:
      return s.pi.levi_positions();
    case SlotSpec::Kind::levi_labels: {
      std::vector<std::pair<int, int>> pos;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (s.labels[i] == s.labels[j]) pos.push_back({i, j});
      return pos;
    }
    case SlotSpec::Kind::unip_upper:
      return s.pi.strict_upper_positions();
    case SlotSpec::Kind::unip_lower:
      return s.pi.strict_lower_positions();
    case SlotSpec::Kind::lower_parabolic:
      return s.pi.lower_parabolic_positions();
    case SlotSpec::Kind::support:
      return s.positions;
  }
  return {};
}

// Max |entry| violating the slot's shape; for the non-group kinds the
// unipotent ones constrain g - I, the rest constrain g itself.
double shape_violation(const SlotSpec& s, const Matrix& g, bool& exact_ok) {
  int n = g.rows();
  bool subtract_identity = s.kind == SlotSpec::Kind::unip_upper ||
                           s.kind == SlotSpec::Kind::unip_lower ||
                           s.kind == SlotSpec::Kind::support;
  Matrix d = subtract_identity ? g - Matrix::identity(n, g.mode()) : g;
  auto pos = spec_positions(s, n);
  std::vector<char> ok(std::size_t(n) * n, 0);
  for (auto [i, j] : pos) ok[std::size_t(i) * n + j] = 1;
  double worst = 0.0;
  exact_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (ok[std::size_t(i) * n + j]) continue;
      const Scalar& e = d.at(i, j);
      if (!e.is_zero()) exact_ok = false;
      worst = std::max(worst, std::abs(e.approx()));
    }
  return worst;
}

const char* kind_name(SlotSpec::Kind k) {
  switch (k) {
    case SlotSpec::Kind::group:
      return "group";
    case SlotSpec::Kind::levi:
      return "levi";
    case SlotSpec::Kind::levi_labels:
      return "levi";
    case SlotSpec::Kind::unip_upper:
      return "unipotent upper";
    case SlotSpec::Kind::unip_lower:
      return "unipotent lower";
    case SlotSpec::Kind::lower_parabolic:
      return "lower parabolic";
    case SlotSpec::Kind::support:
      return "stokes";
  }
  return "?";
}

// Product-order slot indices w_1..w_N for the models whose G moment is
// C^-1 h w_1 .. w_N C. Stokes slots are stored in ascending direction
// order but multiply in descending order.
std::optional<std::vector<int>> word_slots(const SpaceModel& m) {
  if (std::holds_alternative<DoubleModel>(m.v)) return std::vector<int>{};
  if (const auto* f = std::get_if<FissionModel>(&m.v)) {
    std::vector<int> w;
    for (int j = 0; j < 2 * f->r; ++j) w.push_back(2 + j);
    return w;
  }
  if (const auto* f = std::get_if<MultiFissionModel>(&m.v)) {
    std::vector<int> w;
    for (int j = 0; j < 2 * f->chain.depth(); ++j) w.push_back(2 + j);
    return w;
  }
  if (const auto* f = std::get_if<StokesSpaceModel>(&m.v)) {
    std::vector<int> w;
    for (int j = int(f->dirs.size()) - 1; j >= 0; --j) w.push_back(2 + j);
    return w;
  }
  return std::nullopt;
}

std::vector<std::pair<int, int>> child_ranges(const FusionModel& f) {
  std::vector<std::pair<int, int>> r;
  int off = 0;
  for (const auto& c : f.children) {
    int k = slot_count(c);
    r.push_back({off, k});
    off += k;
  }
  return r;
}

SpacePoint sub_point(const SpacePoint& p, int start, int count) {
  return SpacePoint{std::vector<GroupElem>(p.slots.begin() + start,
                                           p.slots.begin() + start + count)};
}

Tangent sub_tangent(const Tangent& t, int start, int count) {
  return Tangent{std::vector<Matrix>(t.comps.begin() + start,
                                     t.comps.begin() + start + count)};
}

// P(A,B)(X,Y) = tr(A(X) B(Y)) - tr(A(Y) B(X)); arguments are the values
// of the one-forms A, B on X and Y.
Scalar pair_form(const Matrix& ax, const Matrix& ay, const Matrix& bx,
                 const Matrix& by) {
  return (ax * by).trace() - (ay * bx).trace();
}

// One-form values entering the fission-type two-form, evaluated on one
// tangent. With C_N = C, C_j = w_{j+1} .. w_N C and b = h w_1 .. w_N:
struct FissionForms {
  Matrix a;               // dC C^-1
  Matrix c0r;             // dC_0 C_0^-1
  Matrix hldh;            // h^-1 dh
  Matrix dbb;             // db b^-1
  std::vector<Matrix> l;  // C_j^-1 dC_j, j = 0..N
  Matrix b;               // value of b
};

FissionForms fission_forms(const SpacePoint& p, const std::vector<int>& word,
                           const Tangent& t) {
  int nw = int(word.size());
  std::vector<Jet> cj(nw + 1, jet_slot(p.slots[0].mat(), t.comps[0]));
  for (int j = nw - 1; j >= 0; --j) {
    int s = word[j];
    cj[j] = jet_mul(jet_slot(p.slots[s].mat(), t.comps[s]), cj[j + 1]);
  }
  Jet bj = jet_slot(p.slots[1].mat(), t.comps[1]);
  for (int j = 0; j < nw; ++j) {
    int s = word[j];
    bj = jet_mul(bj, jet_slot(p.slots[s].mat(), t.comps[s]));
  }
  FissionForms f;
  f.a = t.comps[0];
  f.c0r = cj[0].der * cj[0].val.inverse();
  f.hldh = p.slots[1].inv() * t.comps[1] * p.slots[1].mat();
  f.dbb = bj.der * bj.val.inverse();
  f.l.reserve(nw + 1);
  for (int j = 0; j <= nw; ++j) f.l.push_back(cj[j].val.inverse() * cj[j].der);
  f.b = bj.val;
  return f;
}

Scalar fission_two_form(const SpacePoint& p, const std::vector<int>& word,
                        const Tangent& x, const Tangent& y) {
  FissionForms fx = fission_forms(p, word, x);
  FissionForms fy = fission_forms(p, word, y);
  Matrix binv = fx.b.inverse();
  Scalar two_omega = pair_form(fx.a, fy.a, fx.b * fx.a * binv, fx.b * fy.a * binv);
  two_omega += pair_form(fx.a, fy.a, fx.dbb, fy.dbb);
  two_omega += pair_form(fx.c0r, fy.c0r, fx.hldh, fy.hldh);
  for (int j = 0; j + 1 < int(fx.l.size()); ++j)
    two_omega -= pair_form(fx.l[j], fy.l[j], fx.l[j + 1], fy.l[j + 1]);
  return two_omega.div_int(2);
}

// Offsets of each leaf's C slot, for the diagonal G action.
void leaf_offsets(const SpaceModel& m, int base, std::vector<int>& out) {
  if (const auto* f = std::get_if<FusionModel>(&m.v)) {
    auto ranges = child_ranges(*f);
    for (int i = 0; i < int(f->children.size()); ++i)
      leaf_offsets(f->children[i], base + ranges[i].first, out);
  } else {
    out.push_back(base);
  }
}

struct FactorLoc {
  const SpaceModel* leaf = nullptr;
  int offset = 0;
};

FactorLoc resolve_factor(const SpaceModel& m, const ActingFactor& f) {
  const SpaceModel* cur = &m;
  int off = 0;
  for (int step : f.path) {
    const auto* fu = std::get_if<FusionModel>(&cur->v);
    if (!fu || step < 0 || step >= int(fu->children.size()))
      throw validation_error("acting factor path does not match the model");
    off += child_ranges(*fu)[step].first;
    cur = &fu->children[step];
  }
  if (std::holds_alternative<FusionModel>(cur->v))
    throw validation_error("acting factor path must end at a leaf model");
  if (f.hfactor && std::holds_alternative<ConjClassModel>(cur->v))
    throw validation_error("conjugacy-class charts carry no torus factor");
  return {cur, off};
}

double point_scale(const SpacePoint& p) {
  double s = 1.0;
  for (const auto& g : p.slots) s = std::max(s, g.mat().max_abs());
  return s;
}

}  // namespace

SpaceModel make_conj_class(Matrix x0) {
  (void)GroupElem(x0);  // rejects singular base points
  return SpaceModel{ConjClassModel{std::move(x0)}};
}

SpaceModel make_double(int n) {
  if (n < 1) throw validation_error("double model needs n >= 1");
  return SpaceModel{DoubleModel{n}};
}

SpaceModel make_fission(Partition pi, int r) {
  if (r < 1) throw validation_error("fission model needs r >= 1");
  return SpaceModel{FissionModel{std::move(pi), r}};
}

SpaceModel make_multi_fission(LeviChain chain) {
  chain.validate();
  if (chain.depth() < 1)
    throw validation_error("multi-fission model needs a nonempty chain");
  return SpaceModel{MultiFissionModel{std::move(chain)}};
}

SpaceModel make_stokes_space(IrregularType q) {
  q.validate();
  auto dirs = singular_directions(q);
  for (const auto& d : dirs) stokes_group_basis(q, d.angle);  // rejects cyclic support
  auto labels = normalize_labels(centralizer_labels(q, 1));
  return SpaceModel{StokesSpaceModel{std::move(q), std::move(dirs), std::move(labels)}};
}

SpaceModel make_mspace(Partition pi) { return SpaceModel{MSpaceModel{std::move(pi)}}; }

SpaceModel fuse(std::vector<SpaceModel> children) {
  if (children.empty()) throw validation_error("fusion needs at least one factor");
  int n = model_n(children[0]);
  std::optional<Mode> mode;
  for (const auto& c : children) {
    if (model_n(c) != n) throw size_error("fusion factors must share the group");
    auto cm = model_mode(c);
    if (cm && mode && *cm != *mode)
      throw mode_error("fusion factors mix exact and floating data");
    if (cm) mode = cm;
  }
  return SpaceModel{FusionModel{std::move(children)}};
}

int model_n(const SpaceModel& m) {
  return std::visit(
      [](const auto& mm) -> int {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConjClassModel>)
          return mm.base.n();
        else if constexpr (std::is_same_v<T, DoubleModel>)
          return mm.n;
        else if constexpr (std::is_same_v<T, FissionModel>)
          return mm.pi.n();
        else if constexpr (std::is_same_v<T, MultiFissionModel>)
          return mm.chain.n();
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return mm.type.n;
        else if constexpr (std::is_same_v<T, MSpaceModel>)
          return mm.pi.n();
        else
          return model_n(mm.children[0]);
      },
      m.v);
}

std::optional<Mode> model_mode(const SpaceModel& m) {
  return std::visit(
      [](const auto& mm) -> std::optional<Mode> {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConjClassModel>)
          return mm.base.mode();
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return mm.type.mode;
        else if constexpr (std::is_same_v<T, FusionModel>) {
          for (const auto& c : mm.children)
            if (auto cm = model_mode(c)) return cm;
          return std::nullopt;
        } else
          return std::nullopt;
      },
      m.v);
}

std::string model_name(const SpaceModel& m) {
  return std::visit(
      [](const auto& mm) -> std::string {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConjClassModel>)
          return "conj_class";
        else if constexpr (std::is_same_v<T, DoubleModel>)
          return "double";
        else if constexpr (std::is_same_v<T, FissionModel>)
          return "fission";
        else if constexpr (std::is_same_v<T, MultiFissionModel>)
          return "multi_fission";
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return "stokes";
        else if constexpr (std::is_same_v<T, MSpaceModel>)
          return "mspace";
        else {
          std::string s = "fusion(";
          for (std::size_t i = 0; i < mm.children.size(); ++i) {
            if (i) s += ",";
            s += model_name(mm.children[i]);
          }
          return s + ")";
        }
      },
      m.v);
}

int slot_count(const SpaceModel& m) { return int(slot_specs(m).size()); }

std::vector<std::vector<std::pair<int, int>>> tangent_positions(
    const SpaceModel& m) {
  int n = model_n(m);
  std::vector<std::vector<std::pair<int, int>>> out;
  for (const auto& s : slot_specs(m)) out.push_back(spec_positions(s, n));
  return out;
}

void validate_point(const SpaceModel& m, const SpacePoint& p,
                    const Tolerances& tol) {
  auto specs = slot_specs(m);
  if (int(p.slots.size()) != int(specs.size()))
    throw size_error("point has " + std::to_string(p.slots.size()) +
                     " slots, model needs " + std::to_string(specs.size()));
  int n = model_n(m);
  auto mode = model_mode(m);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const Matrix& g = p.slots[k].mat();
    if (g.n() != n) throw size_error("slot " + std::to_string(k) + " has wrong size");
    if (g.mode() != p.slots[0].mode())
      throw mode_error("point mixes exact and floating slots");
    if (mode && g.mode() != *mode)
      throw mode_error("point mode differs from the model's data");
    bool exact_ok = true;
    double worst = shape_violation(specs[k], g, exact_ok);
    bool bad = g.mode() == Mode::exact
                   ? !exact_ok
                   : worst > tol.identity * std::max(1.0, g.max_abs());
    if (bad)
      throw validation_error("slot " + std::to_string(k) + " is not in the " +
                             kind_name(specs[k].kind) + " subgroup");
  }
}

void validate_tangent(const SpaceModel& m, const SpacePoint& p,
                      const Tangent& t, const Tolerances& tol) {
  auto specs = slot_specs(m);
  if (int(t.comps.size()) != int(specs.size()))
    throw size_error("tangent has wrong number of components");
  int n = model_n(m);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const Matrix& v = t.comps[k];
    if (v.rows() != n || v.cols() != n)
      throw size_error("tangent component " + std::to_string(k) + " has wrong size");
    if (v.mode() != p.slots[k].mode())
      throw mode_error("tangent mode differs from the point");
    // In right-logarithmic form every slot's tangent lives in the same
    // entry pattern as the slot's subgroup.
    auto pos = spec_positions(specs[k], n);
    std::vector<char> ok(std::size_t(n) * n, 0);
    for (auto [i, j] : pos) ok[std::size_t(i) * n + j] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (ok[std::size_t(i) * n + j]) continue;
        const Scalar& e = v.at(i, j);
        bool bad = v.mode() == Mode::exact
                       ? !e.is_zero()
                       : std::abs(e.approx()) >
                             tol.identity * std::max(1.0, v.max_abs());
        if (bad)
          throw validation_error("tangent component " + std::to_string(k) +
                                 " leaves the slot's Lie algebra");
      }
  }
}

SpacePoint make_point(const SpaceModel& m, const std::vector<Matrix>& slots,
                      const Tolerances& tol) {
  SpacePoint p;
  p.slots.reserve(slots.size());
  for (const auto& g : slots) p.slots.emplace_back(g, tol);
  validate_point(m, p, tol);
  return p;
}

std::vector<Matrix> moment(const SpaceModel& m, const SpacePoint& p) {
  if (const auto* fu = std::get_if<FusionModel>(&m.v)) {
    auto ranges = child_ranges(*fu);
    std::vector<Matrix> out;
    Matrix g = Matrix::identity(model_n(m), p.slots[0].mode());
    std::vector<Matrix> hs;
    for (int i = 0; i < int(fu->children.size()); ++i) {
      auto cm = moment(fu->children[i], sub_point(p, ranges[i].first, ranges[i].second));
      g = g * cm[0];
      for (std::size_t k = 1; k < cm.size(); ++k) hs.push_back(cm[k]);
    }
    out.push_back(g);
    for (auto& h : hs) out.push_back(std::move(h));
    return out;
  }
  if (const auto* cc = std::get_if<ConjClassModel>(&m.v)) {
    const GroupElem& c = p.slots[0];
    return {c.inv() * cc->base * c.mat()};
  }
  if (const auto* ms = std::get_if<MSpaceModel>(&m.v)) {
    const GroupElem& c = p.slots[0];
    const Matrix& par = p.slots[1].mat();
    Matrix varpi = ms->pi.block_diagonal_part(par);
    return {c.inv() * par * c.mat(), varpi.inverse()};
  }
  auto word = word_slots(m);
  const GroupElem& c = p.slots[0];
  Matrix b = p.slots[1].mat();
  for (int s : *word) b = b * p.slots[s].mat();
  return {c.inv() * b * c.mat(), p.slots[1].inv()};
}

Jet moment_g_jet(const SpaceModel& m, const SpacePoint& p, const Tangent& t) {
  if (const auto* fu = std::get_if<FusionModel>(&m.v)) {
    auto ranges = child_ranges(*fu);
    Jet out = jet_const(Matrix::identity(model_n(m), p.slots[0].mode()));
    for (int i = 0; i < int(fu->children.size()); ++i)
      out = jet_mul(out, moment_g_jet(fu->children[i],
                                      sub_point(p, ranges[i].first, ranges[i].second),
                                      sub_tangent(t, ranges[i].first, ranges[i].second)));
    return out;
  }
  Jet cj = jet_slot(p.slots[0].mat(), t.comps[0]);
  if (const auto* cc = std::get_if<ConjClassModel>(&m.v))
    return jet_mul(jet_inv(cj), jet_mul(jet_const(cc->base), cj));
  if (std::holds_alternative<MSpaceModel>(m.v))
    return jet_mul(jet_inv(cj),
                   jet_mul(jet_slot(p.slots[1].mat(), t.comps[1]), cj));
  auto word = word_slots(m);
  Jet bj = jet_slot(p.slots[1].mat(), t.comps[1]);
  for (int s : *word) bj = jet_mul(bj, jet_slot(p.slots[s].mat(), t.comps[s]));
  return jet_mul(jet_inv(cj), jet_mul(bj, cj));
}

Scalar two_form(const SpaceModel& m, const SpacePoint& p, const Tangent& x,
                const Tangent& y) {
  if (const auto* cc = std::get_if<ConjClassModel>(&m.v)) {
    // 2 omega = P(dC C^-1, Ad_{x0} dC C^-1)
    const Matrix& ax = x.comps[0];
    const Matrix& ay = y.comps[0];
    Matrix x0i = cc->base.inverse();
    return pair_form(ax, ay, cc->base * ax * x0i, cc->base * ay * x0i).div_int(2);
  }
  if (std::holds_alternative<MSpaceModel>(m.v)) {
    // 2 omega = P(dC C^-1, Ad_p dC C^-1) + P(dC C^-1, p^-1 dp + dp p^-1)
    const Matrix& ax = x.comps[0];
    const Matrix& ay = y.comps[0];
    const GroupElem& par = p.slots[1];
    auto sym = [&](const Matrix& xi) {
      return par.inv() * xi * par.mat() + xi;  // p^-1 dp + dp p^-1 at dp p^-1 = xi
    };
    Scalar two_omega =
        pair_form(ax, ay, par.mat() * ax * par.inv(), par.mat() * ay * par.inv());
    two_omega += pair_form(ax, ay, sym(x.comps[1]), sym(y.comps[1]));
    return two_omega.div_int(2);
  }
  if (const auto* fu = std::get_if<FusionModel>(&m.v)) {
    auto ranges = child_ranges(*fu);
    int nch = int(fu->children.size());
    Mode mode = p.slots[0].mode();
    Scalar total = Scalar::zero(mode);
    std::vector<Jet> mx, my;
    for (int i = 0; i < nch; ++i) {
      SpacePoint cp = sub_point(p, ranges[i].first, ranges[i].second);
      Tangent cx = sub_tangent(x, ranges[i].first, ranges[i].second);
      Tangent cy = sub_tangent(y, ranges[i].first, ranges[i].second);
      total += two_form(fu->children[i], cp, cx, cy);
      mx.push_back(moment_g_jet(fu->children[i], cp, cx));
      my.push_back(moment_g_jet(fu->children[i], cp, cy));
    }
    // omega = sum omega_k - 1/2 sum_{k>=2} P(Pi^-1 dPi, dmu_k mu_k^-1)
    // with Pi the product of the moments before the k-th factor.
    Jet px = mx[0], py = my[0];
    for (int k = 1; k < nch; ++k) {
      Matrix pinv = px.val.inverse();
      Matrix minv = mx[k].val.inverse();
      total -= pair_form(pinv * px.der, pinv * py.der, mx[k].der * minv,
                         my[k].der * minv)
                   .div_int(2);
      px = jet_mul(px, mx[k]);
      py = jet_mul(py, my[k]);
    }
    return total;
  }
  return fission_two_form(p, *word_slots(m), x, y);
}

std::vector<ActingFactor> acting_factors(const SpaceModel& m) {
  std::vector<ActingFactor> out;
  out.push_back({{}, false});
  std::function<void(const SpaceModel&, std::vector<int>)> walk =
      [&](const SpaceModel& mm, std::vector<int> path) {
        if (const auto* fu = std::get_if<FusionModel>(&mm.v)) {
          for (int i = 0; i < int(fu->children.size()); ++i) {
            auto sub = path;
            sub.push_back(i);
            walk(fu->children[i], sub);
          }
        } else if (!std::holds_alternative<ConjClassModel>(mm.v)) {
          out.push_back({path, true});
        }
      };
  walk(m, {});
  return out;
}

std::string factor_name(const ActingFactor& f) {
  if (!f.hfactor) return "G";
  std::string s = "H";
  for (int i : f.path) s += "." + std::to_string(i);
  return s;
}

void validate_acting_lie(const SpaceModel& m, const ActingFactor& f,
                         const Matrix& xi) {
  if (xi.n() != model_n(m)) throw size_error("acting element has wrong size");
  if (!f.hfactor) return;
  FactorLoc loc = resolve_factor(m, f);
  bool ok = std::visit(
      [&](const auto& mm) -> bool {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, DoubleModel>)
          return true;
        else if constexpr (std::is_same_v<T, FissionModel>)
          return mm.pi.is_block_diagonal(xi);
        else if constexpr (std::is_same_v<T, MultiFissionModel>)
          return mm.chain.pi(1).is_block_diagonal(xi);
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return is_label_block_diagonal(xi, mm.levi_labels);
        else if constexpr (std::is_same_v<T, MSpaceModel>)
          return mm.pi.is_block_diagonal(xi);
        else
          return false;
      },
      loc.leaf->v);
  if (!ok)
    throw validation_error("acting element leaves the factor's Lie algebra");
}

Tangent fundamental_tangent(const SpaceModel& m, const SpacePoint& p,
                            const ActingFactor& f, const Matrix& xi) {
  validate_acting_lie(m, f, xi);
  int n = model_n(m);
  Mode mode = p.slots[0].mode();
  Tangent t;
  t.comps.assign(slot_count(m), Matrix::zeros(n, mode));
  if (!f.hfactor) {
    // (C, ...) -> (C g^-1, ...): the C slot of every leaf moves by Ad_C xi.
    std::vector<int> offs;
    leaf_offsets(m, 0, offs);
    for (int off : offs)
      t.comps[off] = p.slots[off].mat() * xi * p.slots[off].inv();
    return t;
  }
  FactorLoc loc = resolve_factor(m, f);
  // (C, v, ...) -> (kC, kvk^-1, ...) with k = e^{-s xi}.
  int count = slot_count(*loc.leaf);
  t.comps[loc.offset] = -xi;
  for (int k = 1; k < count; ++k) {
    const GroupElem& g = p.slots[loc.offset + k];
    t.comps[loc.offset + k] = g.mat() * xi * g.inv() - xi;
  }
  return t;
}

Jet moment_factor_jet(const SpaceModel& m, const SpacePoint& p,
                      const Tangent& t, const ActingFactor& f) {
  if (!f.hfactor) return moment_g_jet(m, p, t);
  FactorLoc loc = resolve_factor(m, f);
  if (const auto* ms = std::get_if<MSpaceModel>(&loc.leaf->v)) {
    const Matrix& par = p.slots[loc.offset + 1].mat();
    const Matrix& xi = t.comps[loc.offset + 1];
    Jet varpi{ms->pi.block_diagonal_part(par),
              ms->pi.block_diagonal_part(xi * par)};
    return jet_inv(varpi);
  }
  return jet_inv(jet_slot(p.slots[loc.offset + 1].mat(), t.comps[loc.offset + 1]));
}

Scalar qh2_residual(const SpaceModel& m, const SpacePoint& p,
                    const ActingFactor& f, const Matrix& xi, const Tangent& y) {
  Tangent fx = fundamental_tangent(m, p, f, xi);
  Scalar lhs = two_form(m, p, fx, y);
  Jet mu = moment_factor_jet(m, p, y, f);
  Matrix minv = mu.val.inverse();
  Scalar rhs = trace_form(minv * mu.der + mu.der * minv, xi).div_int(2);
  return lhs - rhs;
}

SpacePoint transform_point(const SpaceModel& m, const SpacePoint& p,
                           const ActingFactor& f, const GroupElem& g) {
  if (g.n() != model_n(m)) throw size_error("acting element has wrong size");
  SpacePoint q = p;
  if (!f.hfactor) {
    std::vector<int> offs;
    leaf_offsets(m, 0, offs);
    GroupElem gi = g.inverse();
    for (int off : offs) q.slots[off] = p.slots[off] * gi;
    return q;
  }
  FactorLoc loc = resolve_factor(m, f);
  int count = slot_count(*loc.leaf);
  q.slots[loc.offset] = g * p.slots[loc.offset];
  for (int k = 1; k < count; ++k)
    q.slots[loc.offset + k] = g * p.slots[loc.offset + k] * g.inverse();
  return q;
}

Tangent transform_tangent(const SpaceModel& m, const Tangent& t,
                          const ActingFactor& f, const GroupElem& g) {
  // Right-logarithmic components are inert under the G factor and move
  // by Ad_g on the acted leaf under an H factor.
  if (!f.hfactor) return t;
  FactorLoc loc = resolve_factor(m, f);
  int count = slot_count(*loc.leaf);
  Tangent out = t;
  for (int k = 0; k < count; ++k)
    out.comps[loc.offset + k] = g.mat() * t.comps[loc.offset + k] * g.inv();
  return out;
}

bool mspace_equivalent(const Partition& pi, const SpacePoint& a,
                       const SpacePoint& b, const Tolerances& tol) {
  if (a.slots.size() != 2 || b.slots.size() != 2)
    throw size_error("mspace points have two slots");
  Matrix w = b.slots[0].mat() * a.slots[0].inv();
  Mode mode = w.mode();
  double scale = std::max(point_scale(a), point_scale(b));
  if (mode == Mode::exact) {
    if (!pi.is_unipotent_lower(w)) return false;
  } else {
    Matrix d = w - Matrix::identity(w.n(), mode) - pi.strict_lower_part(w);
    if (d.max_abs() > tol.identity * std::max(1.0, scale)) return false;
  }
  Matrix moved = w * a.slots[1].mat() * w.inverse();
  Matrix diff = moved - b.slots[1].mat();
  if (mode == Mode::exact) return diff.is_zero();
  return diff.max_abs() <= tol.identity * std::max(1.0, scale * scale);
}

Scalar conj_class_form_ambient(const Matrix& x, const Matrix& v,
                               const Matrix& w, const Tolerances& tol) {
  int n = x.n();
  Mode mode = x.mode();
  // Solve x zeta - zeta x = v for zeta (row-major unknowns).
  Matrix sys(n * n, n * n, mode);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int row = i * n + j;
      for (int k = 0; k < n; ++k) {
        sys.at(row, k * n + j) += x.at(i, k);
        sys.at(row, i * n + k) -= x.at(k, j);
      }
    }
  auto solve_one = [&](const Matrix& rhs) {
    std::vector<Scalar> b;
    b.reserve(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b.push_back(rhs.at(i, j));
    auto sol = solve_consistent(sys, b, tol);
    if (!sol)
      throw validation_error("vector is not tangent to the conjugacy class");
    Matrix z(n, n, mode);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) z.at(i, j) = (*sol)[std::size_t(i) * n + j];
    return z;
  };
  Matrix zeta = solve_one(v);
  Matrix eta = solve_one(w);
  Matrix xi_ = x.inverse(tol);
  Scalar val = trace_form(zeta, x * eta * xi_) - trace_form(eta, x * zeta * xi_);
  return val.div_int(2);
}

SpacePoint random_point(Rng& r, const SpaceModel& m, Mode mode) {
  int n = model_n(m);
  if (auto mm = model_mode(m); mm && *mm != mode)
    throw mode_error("requested mode differs from the model's data");
  std::vector<Matrix> slots;
  for (const auto& s : slot_specs(m)) {
    switch (s.kind) {
      case SlotSpec::Kind::group:
        slots.push_back(random_invertible(r, n, mode));
        break;
      case SlotSpec::Kind::levi:
        slots.push_back(random_block_diag_invertible(r, s.pi, mode));
        break;
      case SlotSpec::Kind::levi_labels:
        slots.push_back(random_label_block_diag_invertible(r, s.labels, mode));
        break;
      case SlotSpec::Kind::unip_upper:
        slots.push_back(random_unipotent_upper(r, s.pi, mode));
        break;
      case SlotSpec::Kind::unip_lower:
        slots.push_back(random_unipotent_lower(r, s.pi, mode));
        break;
      case SlotSpec::Kind::lower_parabolic:
        slots.push_back(random_block_diag_invertible(r, s.pi, mode) +
                        random_strict_lower(r, s.pi, mode));
        break;
      case SlotSpec::Kind::support:
        slots.push_back(Matrix::identity(n, mode) +
                        random_support(r, n, s.positions, mode));
        break;
    }
  }
  return make_point(m, slots);
}

Tangent random_tangent(Rng& r, const SpaceModel& m, Mode mode) {
  int n = model_n(m);
  Tangent t;
  for (const auto& pos : tangent_positions(m))
    t.comps.push_back(random_support(r, n, pos, mode));
  return t;
}

}  // namespace wcv
