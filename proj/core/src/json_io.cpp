#include "wcv/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wcv {

namespace {

using nlohmann::json;

std::string mode_tag(Mode m) { return m == Mode::exact ? "exact" : "floating"; }

Mode mode_from_tag(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "floating") return Mode::floating;
  throw validation_error("unknown mode tag '" + s + "'");
}

json scalar_to_json(const Scalar& s) {
  if (s.mode() == Mode::exact) return json::array({s.re_str(), s.im_str()});
  std::complex<double> z = s.float_val();
  return json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const json& j, Mode mode) {
  if (!j.is_array() || j.size() != 2)
    throw validation_error("scalar entries are [re, im] pairs");
  if (mode == Mode::exact) {
    if (!j[0].is_string() || !j[1].is_string())
      throw validation_error("exact entries are rational strings");
    return Scalar::exact_str(j[0].get<std::string>(), j[1].get<std::string>());
  }
  return Scalar::floating(j[0].get<double>(), j[1].get<double>());
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"mode", mode_tag(m.mode())},
              {"entries", std::move(rows)}};
}

Matrix matrix_from(const json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  Mode mode = mode_from_tag(j.at("mode").get<std::string>());
  const json& e = j.at("entries");
  if (int(e.size()) != rows) throw validation_error("matrix row count mismatch");
  Matrix m(rows, cols, mode);
  for (int i = 0; i < rows; ++i) {
    if (int(e[i].size()) != cols)
      throw validation_error("matrix column count mismatch");
    for (int k = 0; k < cols; ++k) m.at(i, k) = scalar_from_json(e[i][k], mode);
  }
  return m;
}

json partition_to(const Partition& pi) {
  return json{{"n", pi.n()}, {"sizes", pi.sizes()}};
}

Partition partition_from(const json& j) {
  return Partition(j.at("n").get<int>(), j.at("sizes").get<std::vector<int>>());
}

json chain_to(const LeviChain& c) {
  json sigma = json::array();
  for (int s : c.sigma) sigma.push_back(s + 1);  // 1-based on disk
  json parts = json::array();
  for (const auto& p : c.partitions) parts.push_back(partition_to(p));
  return json{{"sigma", std::move(sigma)}, {"partitions", std::move(parts)}};
}

LeviChain chain_from(const json& j) {
  LeviChain c;
  for (const auto& s : j.at("sigma")) c.sigma.push_back(s.get<int>() - 1);
  for (const auto& p : j.at("partitions")) c.partitions.push_back(partition_from(p));
  c.validate();
  return c;
}

json type_to(const IrregularType& q) {
  json coeffs = json::array();
  for (const auto& m : q.coeffs) coeffs.push_back(matrix_to(m));
  return json{{"n", q.n}, {"mode", mode_tag(q.mode)}, {"coeffs", std::move(coeffs)}};
}

IrregularType type_from(const json& j) {
  IrregularType q;
  q.n = j.at("n").get<int>();
  q.mode = mode_from_tag(j.at("mode").get<std::string>());
  for (const auto& m : j.at("coeffs")) q.coeffs.push_back(matrix_from(m));
  q.validate();
  return q;
}

json params_to(const UnfoldingParams& up) {
  json ts = json::array();
  for (const auto& t : up.ts) ts.push_back(matrix_to(t));
  return json{{"chain", chain_to(up.chain)}, {"ts", std::move(ts)}};
}

UnfoldingParams params_from(const json& j) {
  UnfoldingParams up;
  up.chain = chain_from(j.at("chain"));
  for (const auto& t : j.at("ts")) up.ts.push_back(matrix_from(t));
  up.validate();
  return up;
}

json model_to(const SpaceModel& m) {
  return std::visit(
      [](const auto& mm) -> json {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, ConjClassModel>)
          return json{{"kind", "conj_class"}, {"base", matrix_to(mm.base)}};
        else if constexpr (std::is_same_v<T, DoubleModel>)
          return json{{"kind", "double"}, {"n", mm.n}};
        else if constexpr (std::is_same_v<T, FissionModel>)
          return json{{"kind", "fission"},
                      {"pi", partition_to(mm.pi)},
                      {"r", mm.r}};
        else if constexpr (std::is_same_v<T, MultiFissionModel>)
          return json{{"kind", "multi_fission"}, {"chain", chain_to(mm.chain)}};
        else if constexpr (std::is_same_v<T, StokesSpaceModel>)
          return json{{"kind", "stokes"}, {"type", type_to(mm.type)}};
        else if constexpr (std::is_same_v<T, MSpaceModel>)
          return json{{"kind", "mspace"}, {"pi", partition_to(mm.pi)}};
        else {
          json children = json::array();
          for (const auto& c : mm.children) children.push_back(model_to(c));
          return json{{"kind", "fusion"}, {"children", std::move(children)}};
        }
      },
      m.v);
}

SpaceModel model_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "conj_class") return make_conj_class(matrix_from(j.at("base")));
  if (kind == "double") return make_double(j.at("n").get<int>());
  if (kind == "fission")
    return make_fission(partition_from(j.at("pi")), j.at("r").get<int>());
  if (kind == "multi_fission") return make_multi_fission(chain_from(j.at("chain")));
  if (kind == "stokes") return make_stokes_space(type_from(j.at("type")));
  if (kind == "mspace") return make_mspace(partition_from(j.at("pi")));
  if (kind == "fusion") {
    std::vector<SpaceModel> children;
    for (const auto& c : j.at("children")) children.push_back(model_from(c));
    return fuse(std::move(children));
  }
  throw validation_error("unknown space model kind '" + kind + "'");
}

json point_to(const SpacePoint& p) {
  json slots = json::array();
  for (const auto& g : p.slots) slots.push_back(matrix_to(g.mat()));
  return json{{"slots", std::move(slots)}};
}

SpacePoint point_from(const json& j) {
  SpacePoint p;
  for (const auto& s : j.at("slots")) p.slots.emplace_back(matrix_from(s));
  return p;
}

json result_to(const UnfoldResult& r) {
  json ms = json::array();
  for (const auto& m : r.ms) ms.push_back(matrix_to(m.mat()));
  return json{{"c", matrix_to(r.c.mat())},
              {"p", matrix_to(r.p.mat())},
              {"ms", std::move(ms)}};
}

UnfoldResult result_from(const json& j) {
  UnfoldResult r{GroupElem(matrix_from(j.at("c"))),
                 GroupElem(matrix_from(j.at("p"))),
                 {}};
  for (const auto& m : j.at("ms")) r.ms.emplace_back(matrix_from(m));
  return r;
}

json curve_to(const CurveData& c) {
  json points = json::array();
  for (const auto& mp : c.points)
    points.push_back(json{
        {"type", type_to(mp.type)},
        {"tail", mp.tail == TailKind::fission ? "fission" : "stokes"}});
  return json{{"genus", c.genus},
              {"n", c.n},
              {"mode", mode_tag(c.mode)},
              {"points", std::move(points)}};
}

CurveData curve_from(const json& j) {
  CurveData c;
  c.genus = j.at("genus").get<int>();
  c.n = j.at("n").get<int>();
  c.mode = mode_from_tag(j.at("mode").get<std::string>());
  for (const auto& p : j.at("points")) {
    MarkedPoint mp;
    mp.type = type_from(p.at("type"));
    const std::string tail = p.at("tail").get<std::string>();
    if (tail == "fission")
      mp.tail = TailKind::fission;
    else if (tail == "stokes")
      mp.tail = TailKind::stokes;
    else
      throw validation_error("unknown tail kind '" + tail + "'");
    c.points.push_back(std::move(mp));
  }
  c.validate();
  return c;
}

json rep_to(const RepPoint& rp) {
  json handles = json::array();
  for (const auto& [a, b] : rp.handles)
    handles.push_back(json::array({matrix_to(a.mat()), matrix_to(b.mat())}));
  json marked = json::array();
  for (const auto& s : rp.marked) {
    json tail = json::array();
    for (const auto& t : s.tail) tail.push_back(matrix_to(t.mat()));
    marked.push_back(json{{"c", matrix_to(s.c.mat())},
                          {"h", matrix_to(s.h.mat())},
                          {"tail", std::move(tail)}});
  }
  return json{{"handles", std::move(handles)}, {"marked", std::move(marked)}};
}

RepPoint rep_from(const json& j) {
  RepPoint rp;
  for (const auto& h : j.at("handles")) {
    if (!h.is_array() || h.size() != 2)
      throw validation_error("handles are [A, B] pairs");
    rp.handles.push_back(
        {GroupElem(matrix_from(h[0])), GroupElem(matrix_from(h[1]))});
  }
  for (const auto& s : j.at("marked")) {
    MarkedSlot slot{GroupElem(matrix_from(s.at("c"))),
                    GroupElem(matrix_from(s.at("h"))),
                    {}};
    for (const auto& t : s.at("tail")) slot.tail.emplace_back(matrix_from(t));
    rp.marked.push_back(std::move(slot));
  }
  return rp;
}

std::string dump(const json& j, int indent) {
  return indent < 0 ? j.dump() : j.dump(indent);
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed json: ") + e.what());
  }
}

template <typename F>
auto guarded(const std::string& text, F&& f) {
  json j = parse(text);
  try {
    return f(j);
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad json shape: ") + e.what());
  }
}

}  // namespace

std::string to_json_string(const Matrix& m, int indent) {
  return dump(matrix_to(m), indent);
}
std::string to_json_string(const Partition& pi, int indent) {
  return dump(partition_to(pi), indent);
}
std::string to_json_string(const LeviChain& chain, int indent) {
  return dump(chain_to(chain), indent);
}
std::string to_json_string(const IrregularType& q, int indent) {
  return dump(type_to(q), indent);
}
std::string to_json_string(const UnfoldingParams& up, int indent) {
  return dump(params_to(up), indent);
}
std::string to_json_string(const SpaceModel& m, int indent) {
  return dump(model_to(m), indent);
}
std::string to_json_string(const SpacePoint& p, int indent) {
  return dump(point_to(p), indent);
}
std::string to_json_string(const UnfoldResult& r, int indent) {
  return dump(result_to(r), indent);
}
std::string to_json_string(const CurveData& c, int indent) {
  return dump(curve_to(c), indent);
}
std::string to_json_string(const RepPoint& rp, int indent) {
  return dump(rep_to(rp), indent);
}

Matrix matrix_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return matrix_from(j); });
}
Partition partition_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return partition_from(j); });
}
LeviChain levi_chain_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return chain_from(j); });
}
IrregularType irregular_type_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return type_from(j); });
}
UnfoldingParams unfolding_params_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return params_from(j); });
}
SpaceModel space_model_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return model_from(j); });
}
SpacePoint space_point_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return point_from(j); });
}
UnfoldResult unfold_result_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return result_from(j); });
}
CurveData curve_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return curve_from(j); });
}
RepPoint rep_point_from_json(const std::string& text) {
  return guarded(text, [](const json& j) { return rep_from(j); });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace wcv
