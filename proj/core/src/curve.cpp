#include "wcv/curve.hpp"

#include <algorithm>

#include "wcv/linalg.hpp"

namespace wcv {

namespace {

// Incremental span of matrices viewed as flat vectors, kept in reduced
// echelon form for membership tests.
class MatrixSpan {
 public:
  MatrixSpan(int n, Mode mode, const Tolerances& tol)
      : n_(n), mode_(mode), tol_(tol) {}

  int dim() const { return int(rows_.size()); }

  // Returns true (and absorbs the matrix) if it enlarges the span.
  bool add(const Matrix& m) {
    std::vector<Scalar> v;
    v.reserve(std::size_t(n_) * n_);
    double scale = std::max(1.0, m.max_abs());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) v.push_back(m.at(i, j));
    for (const auto& [pivot, row] : rows_) {
      const Scalar& c = v[pivot];
      if (is_zero(c, scale)) continue;
      Scalar f = c;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f * row[k];
    }
    int pivot = -1;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!is_zero(v[k], scale)) {
        pivot = int(k);
        break;
      }
    if (pivot < 0) return false;
    Scalar inv = v[pivot].inv();
    for (auto& c : v) c = c * inv;
    rows_.push_back({pivot, std::move(v)});
    std::sort(rows_.begin(), rows_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return true;
  }

 private:
  bool is_zero(const Scalar& c, double scale) const {
    if (mode_ == Mode::exact) return c.is_zero();
    return std::abs(c.approx()) <= tol_.pivot * scale;
  }

  int n_;
  Mode mode_;
  Tolerances tol_;
  std::vector<std::pair<int, std::vector<Scalar>>> rows_;
};

// Block-scalar diagonal basis of the point's Levi: one indicator per
// block (label class). Tame points contribute nothing beyond I.
std::vector<Matrix> levi_scalar_basis(const MarkedPoint& mp) {
  int n = mp.type.n;
  Mode mode = mp.type.mode;
  std::vector<int> labels;
  if (mp.type.depth() == 0) return {};
  if (mp.tail == TailKind::stokes) {
    labels = normalize_labels(centralizer_labels(mp.type, 1));
  } else {
    LeviChain chain = levi_chain(mp.type);
    const Partition& pi1 = chain.pi(1);
    labels.resize(n);
    for (int i = 0; i < n; ++i) labels[i] = pi1.block_of(i);
  }
  int nblocks = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<Matrix> out;
  for (int b = 0; b < nblocks; ++b) {
    Matrix z = Matrix::zeros(n, mode);
    for (int i = 0; i < n; ++i)
      if (labels[i] == b) z.at(i, i) = Scalar::one(mode);
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

SpaceModel point_model(const MarkedPoint& mp) {
  mp.type.validate();
  if (mp.type.depth() == 0) return make_double(mp.type.n);
  if (mp.tail == TailKind::stokes) return make_stokes_space(mp.type);
  return make_multi_fission(levi_chain(mp.type));
}

SpacePoint slot_point(const MarkedSlot& s) {
  SpacePoint p;
  p.slots.reserve(2 + s.tail.size());
  p.slots.push_back(s.c);
  p.slots.push_back(s.h);
  for (const auto& g : s.tail) p.slots.push_back(g);
  return p;
}

void CurveData::validate() const {
  if (n < 1) throw validation_error("curve needs n >= 1");
  if (genus < 0) throw validation_error("curve genus must be nonnegative");
  if (points.empty()) throw validation_error("curve needs a marked point");
  for (const auto& mp : points) {
    mp.type.validate();
    if (mp.type.n != n) throw size_error("marked point size differs from curve");
    if (mp.type.mode != mode)
      throw mode_error("marked point mode differs from curve");
  }
}

void validate_rep_point(const CurveData& curve, const RepPoint& rp,
                        const Tolerances& tol) {
  curve.validate();
  if (int(rp.handles.size()) != curve.genus)
    throw size_error("representation needs one handle pair per genus");
  if (rp.marked.size() != curve.points.size())
    throw size_error("representation needs one slot tuple per marked point");
  for (auto& [a, b] : rp.handles) {
    if (a.n() != curve.n || b.n() != curve.n)
      throw size_error("handle size differs from curve");
    if (a.mode() != curve.mode || b.mode() != curve.mode)
      throw mode_error("handle mode differs from curve");
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i)
    validate_point(point_model(curve.points[i]), slot_point(rp.marked[i]), tol);
}

Matrix marked_factor(const CurveData& curve, const RepPoint& rp, int i) {
  return moment(point_model(curve.points[i]), slot_point(rp.marked[i]))[0];
}

Matrix moment_relation_residual(const CurveData& curve, const RepPoint& rp) {
  Matrix prod = Matrix::identity(curve.n, curve.mode);
  for (const auto& [a, b] : rp.handles)
    prod = prod * a.mat() * b.mat() * a.inv() * b.inv();
  for (int i = 0; i < int(curve.points.size()); ++i)
    prod = prod * marked_factor(curve, rp, i);
  return prod - Matrix::identity(curve.n, curve.mode);
}

Scalar det_condition_residual(const CurveData& curve, const RepPoint& rp,
                              const Tolerances& tol) {
  (void)tol;
  Scalar prod = Scalar::one(curve.mode);
  for (const auto& s : rp.marked) prod = prod * s.h.mat().det();
  return prod - Scalar::one(curve.mode);
}

RepPoint complete_relation(const CurveData& curve, RepPoint partial,
                           const Tolerances& tol) {
  curve.validate();
  if (curve.points.back().type.depth() != 0)
    throw validation_error("the reserved final marked point must be tame");
  if (partial.marked.size() + 1 != curve.points.size())
    throw size_error("complete_relation expects all but the final slot");
  Matrix prod = Matrix::identity(curve.n, curve.mode);
  for (const auto& [a, b] : partial.handles)
    prod = prod * a.mat() * b.mat() * a.inv() * b.inv();
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i)
    prod = prod * moment(point_model(curve.points[i]),
                         slot_point(partial.marked[i]))[0];
  GroupElem closing(prod, tol);
  partial.marked.push_back(
      {GroupElem::identity(curve.n, curve.mode), closing.inverse(), {}});
  validate_rep_point(curve, partial, tol);
  return partial;
}

StabilityReport stability_check(const CurveData& curve, const RepPoint& rp,
                                const Tolerances& tol) {
  validate_rep_point(curve, rp, tol);
  int n = curve.n;
  std::vector<Matrix> gens;
  for (const auto& [a, b] : rp.handles) {
    gens.push_back(a.mat());
    gens.push_back(b.mat());
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const MarkedSlot& s = rp.marked[i];
    gens.push_back(s.c.inv() * s.h.mat() * s.c.mat());
    for (const auto& w : s.tail) gens.push_back(s.c.inv() * w.mat() * s.c.mat());
    for (const auto& z : levi_scalar_basis(curve.points[i]))
      gens.push_back(s.c.inv() * z * s.c.mat());
  }

  // Burnside: the words in the generators span all of gl_n exactly when
  // no proper subspace is invariant. Saturate by left multiplication.
  MatrixSpan span(n, curve.mode, tol);
  std::vector<Matrix> queue;
  Matrix id = Matrix::identity(n, curve.mode);
  span.add(id);
  queue.push_back(id);
  while (!queue.empty() && span.dim() < n * n) {
    Matrix b = std::move(queue.back());
    queue.pop_back();
    for (const auto& g : gens) {
      if (span.dim() == n * n) break;
      Matrix v = g * b;
      if (span.add(v)) queue.push_back(std::move(v));
    }
  }
  return {span.dim() == n * n, span.dim()};
}

UnfoldedCurve unfold_wcv(const CurveData& curve, const RepPoint& rp,
                         const std::vector<std::optional<UnfoldingParams>>& params,
                         const Tolerances& tol) {
  validate_rep_point(curve, rp, tol);
  if (params.size() != curve.points.size())
    throw size_error("unfold_wcv needs one parameter entry per marked point");
  UnfoldedCurve out;
  out.curve.genus = curve.genus;
  out.curve.n = curve.n;
  out.curve.mode = curve.mode;
  out.rep.handles = rp.handles;
  IrregularType tame{curve.n, curve.mode, {}};
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const MarkedPoint& mp = curve.points[i];
    if (mp.type.depth() == 0) {
      if (params[i]) throw validation_error("tame points take no parameters");
      out.curve.points.push_back(mp);
      out.rep.marked.push_back(rp.marked[i]);
      continue;
    }
    if (mp.tail == TailKind::stokes)
      throw validation_error("unfolding acts on fission charts; point " +
                             std::to_string(i) + " uses Stokes slots");
    if (!params[i])
      throw validation_error("irregular point " + std::to_string(i) +
                             " needs unfolding parameters");
    const UnfoldingParams& up = *params[i];
    LeviChain chain = levi_chain(mp.type);
    if (up.chain.sigma != chain.sigma ||
        up.chain.depth() != chain.depth())
      throw validation_error("parameters do not match the point's chain");
    for (int j = 1; j <= chain.depth(); ++j)
      if (up.chain.pi(j).sizes() != chain.pi(j).sizes())
        throw validation_error("parameters do not match the point's chain");
    UnfoldResult res = unfold_full(up, slot_point(rp.marked[i]));
    out.curve.points.push_back({tame, TailKind::fission});
    out.rep.marked.push_back({res.c, res.p, {}});
    for (const auto& m : res.ms) {
      out.curve.points.push_back({tame, TailKind::fission});
      out.rep.marked.push_back(
          {GroupElem::identity(curve.n, curve.mode), m, {}});
    }
  }
  validate_rep_point(out.curve, out.rep, tol);
  return out;
}

RepPoint random_rep_point(Rng& rng, const CurveData& curve,
                          const Tolerances& tol) {
  curve.validate();
  if (curve.points.back().type.depth() != 0)
    throw validation_error("the reserved final marked point must be tame");
  RepPoint partial;
  for (int l = 0; l < curve.genus; ++l) {
    GroupElem a(random_invertible(rng, curve.n, curve.mode), tol);
    GroupElem b(random_invertible(rng, curve.n, curve.mode), tol);
    partial.handles.push_back({std::move(a), std::move(b)});
  }
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    SpacePoint p = random_point(rng, point_model(curve.points[i]), curve.mode);
    MarkedSlot s{p.slots[0], p.slots[1],
                 std::vector<GroupElem>(p.slots.begin() + 2, p.slots.end())};
    partial.marked.push_back(std::move(s));
  }
  return complete_relation(curve, std::move(partial), tol);
}

}  // namespace wcv
