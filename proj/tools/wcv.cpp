// wcv: charts, Stokes data and unfoldings for wild character varieties
// of GL_n. Subcommands read/write the JSON formats of the core library;
// exit code 0 = ok, 1 = a checked identity failed, 2 = bad input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wcv/json_io.hpp"
#include "wcv/verify.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return wcv::read_text_file(path);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text << "\n";
  else
    wcv::write_text_file(out, text + "\n");
}

wcv::Mode parse_mode(const std::string& s) {
  if (s == "exact") return wcv::Mode::exact;
  if (s == "float" || s == "floating") return wcv::Mode::floating;
  throw wcv::validation_error("mode must be exact or float");
}

double point_scale(const wcv::SpacePoint& p) {
  double s = 1.0;
  for (const auto& g : p.slots) {
    s = std::max(s, g.mat().max_abs());
    s = std::max(s, g.inv().max_abs());
  }
  double q = s * s;
  return q * q;
}

bool residual_ok(const wcv::Matrix& m, double scale, const wcv::Tolerances& tol) {
  if (m.mode() == wcv::Mode::exact) return m.is_zero();
  return m.max_abs() <= tol.identity * (1.0 + scale);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charts and unfoldings for wild character varieties of GL_n"};
  app.require_subcommand(1);
  // --h names a moment-map slot below, so keep help on the long flag only.
  app.set_help_flag("--help", "print help and exit");
  int rc = 0;

  double tol_identity = wcv::Tolerances{}.identity;
  app.add_option("--tolerance", tol_identity,
                 "identity tolerance for floating-mode checks")
      ->capture_default_str();

  // ---- stokes: directions, groups and dimension audit of a type ----
  auto* sc_stokes = app.add_subcommand(
      "stokes", "singular directions and Stokes groups of an irregular type");
  std::string st_type, st_out;
  bool st_json = false;
  sc_stokes->add_option("--type", st_type, "irregular type JSON file")
      ->required();
  sc_stokes->add_flag("--json", st_json, "machine-readable output");
  sc_stokes->add_option("--out", st_out, "output file (default stdout)");
  sc_stokes->callback([&] {
    wcv::IrregularType q = wcv::irregular_type_from_json(slurp(st_type));
    auto dirs = wcv::singular_directions(q);
    auto audit = wcv::dimension_audit(q);
    auto chain = wcv::levi_chain(q);
    bool consistent = audit.sum_stokes == audit.sum_degrees &&
                      audit.sum_degrees == audit.sum_unipotent;
    if (st_json) {
      nlohmann::json j;
      j["n"] = q.n;
      j["depth"] = q.depth();
      j["directions"] = nlohmann::json::array();
      for (const auto& d : dirs) {
        nlohmann::json jd;
        jd["angle"] = d.angle;
        jd["dim"] = int(d.roots.size());
        jd["roots"] = d.roots;
        j["directions"].push_back(jd);
      }
      j["chain"] = nlohmann::json::parse(wcv::to_json_string(chain));
      j["audit"] = {{"sum_stokes", audit.sum_stokes},
                    {"sum_degrees", audit.sum_degrees},
                    {"sum_unipotent", audit.sum_unipotent},
                    {"consistent", consistent}};
      emit(st_out, j.dump(2));
    } else {
      std::ostringstream ss;
      ss << "irregular type: n = " << q.n << ", depth = " << q.depth() << "\n";
      ss << "singular directions: " << dirs.size() << "\n";
      for (const auto& d : dirs) {
        ss << "  angle " << d.angle << "  dim Sto = " << d.roots.size()
           << "  roots";
        for (auto [k, l] : d.roots) ss << " (" << k + 1 << "," << l + 1 << ")";
        ss << "\n";
      }
      ss << "levi chain depth " << chain.depth() << ", block sizes";
      for (int j = 1; j <= chain.depth(); ++j) {
        ss << " [";
        const auto& sizes = chain.pi(j).sizes();
        for (std::size_t i = 0; i < sizes.size(); ++i)
          ss << (i ? " " : "") << sizes[i];
        ss << "]";
      }
      ss << "\n";
      ss << "dimension audit: sum dim Sto = " << audit.sum_stokes
         << ", sum deg q_alpha = " << audit.sum_degrees
         << ", sum dim U+- = " << audit.sum_unipotent
         << (consistent ? " (consistent)" : " (MISMATCH)");
      emit(st_out, ss.str());
    }
    if (!consistent) rc = 1;
  });

  // ---- params: search admissible unfolding parameters ----
  auto* sc_params = app.add_subcommand(
      "params", "search block-scalar unfolding parameters for a chain");
  std::string pa_type, pa_chain, pa_h, pa_out;
  std::uint64_t pa_seed = 1;
  int pa_max = 1000;
  sc_params->add_option("--type", pa_type,
                        "irregular type JSON (chain derived from it)");
  sc_params->add_option("--chain", pa_chain, "levi chain JSON");
  sc_params->add_option("--h", pa_h, "block-diagonal h slot, matrix JSON")
      ->required();
  sc_params->add_option("--seed", pa_seed, "search seed")->capture_default_str();
  sc_params->add_option("--max-trials", pa_max, "search budget")
      ->capture_default_str();
  sc_params->add_option("--out", pa_out, "output file (default stdout)");
  sc_params->callback([&] {
    if (pa_type.empty() == pa_chain.empty())
      throw wcv::validation_error("give exactly one of --type and --chain");
    wcv::LeviChain chain =
        pa_chain.empty()
            ? wcv::levi_chain(wcv::irregular_type_from_json(slurp(pa_type)))
            : wcv::levi_chain_from_json(slurp(pa_chain));
    wcv::Matrix h = wcv::matrix_from_json(slurp(pa_h));
    wcv::Rng rng(pa_seed);
    wcv::Tolerances tol;
    tol.identity = tol_identity;
    auto ps = wcv::search_parameters(rng, chain, h, pa_max, tol);
    if (!ps.found) {
      std::cerr << "no admissible parameters after " << ps.trials
                << " trials\n";
      rc = 1;
      return;
    }
    wcv::UnfoldingParams up{std::move(chain), std::move(ps.ts)};
    emit(pa_out, wcv::to_json_string(up, 2));
    std::cerr << "found after " << ps.trials << " trials\n";
  });

  // ---- unfold: apply an unfolding to a point and verify it ----
  auto* sc_unfold = app.add_subcommand(
      "unfold", "unfold a fission-space point to tame classes");
  std::string un_params, un_point, un_out;
  bool un_skip = false;
  sc_unfold->add_option("--params", un_params, "unfolding parameters JSON")
      ->required();
  sc_unfold->add_option("--point", un_point, "source point JSON")->required();
  sc_unfold->add_option("--out", un_out, "output file (default stdout)");
  sc_unfold->add_flag("--skip-checks", un_skip,
                      "do not verify moments and the etale rank");
  sc_unfold->callback([&] {
    wcv::UnfoldingParams up = wcv::unfolding_params_from_json(slurp(un_params));
    wcv::SpacePoint pt = wcv::space_point_from_json(slurp(un_point));
    wcv::Tolerances tol;
    tol.identity = tol_identity;
    wcv::SpaceModel model = wcv::source_model(up);
    wcv::validate_point(model, pt, tol);
    wcv::UnfoldResult res = wcv::unfold_full(up, pt);
    if (!un_skip) {
      double scale = point_scale(pt);
      auto mi = wcv::moment_intertwine_residual(up, pt, tol);
      if (!residual_ok(mi.g_residual, scale, tol) ||
          !residual_ok(mi.h_residual, scale, tol)) {
        std::cerr << "moment intertwining residual is nonzero\n";
        rc = 1;
        return;
      }
      auto er = wcv::etale_rank_check(up, pt, tol);
      if (!er.full_rank) {
        std::cerr << "unfolding is not etale here (kernel dimension "
                  << er.kernel_dim << ")\n";
        rc = 1;
        return;
      }
      std::cerr << "moments match; etale of rank " << er.source_dim << "\n";
    }
    emit(un_out, wcv::to_json_string(res, 2));
  });

  // ---- unfold-curve: unfold the irregular points of a representation ----
  auto* sc_curve = app.add_subcommand(
      "unfold-curve", "unfold every irregular point of a curve representation");
  std::string cu_curve, cu_rep, cu_params, cu_out;
  sc_curve->add_option("--curve", cu_curve, "curve data JSON")->required();
  sc_curve->add_option("--rep", cu_rep, "representation point JSON")
      ->required();
  sc_curve
      ->add_option("--params", cu_params,
                   "JSON array, one entry per marked point: unfolding "
                   "parameters or null for tame points")
      ->required();
  sc_curve->add_option("--out", cu_out, "output file (default stdout)");
  sc_curve->callback([&] {
    wcv::CurveData curve = wcv::curve_from_json(slurp(cu_curve));
    wcv::RepPoint rp = wcv::rep_point_from_json(slurp(cu_rep));
    wcv::Tolerances tol;
    tol.identity = tol_identity;
    nlohmann::json arr = nlohmann::json::parse(slurp(cu_params));
    if (!arr.is_array())
      throw wcv::validation_error("--params must be a JSON array");
    std::vector<std::optional<wcv::UnfoldingParams>> ps;
    for (const auto& el : arr) {
      if (el.is_null())
        ps.emplace_back(std::nullopt);
      else
        ps.emplace_back(wcv::unfolding_params_from_json(el.dump()));
    }
    auto uc = wcv::unfold_wcv(curve, rp, ps, tol);
    wcv::Matrix rel = wcv::moment_relation_residual(uc.curve, uc.rep);
    double scale = 1.0;
    for (const auto& s : uc.rep.marked)
      scale = std::max({scale, s.c.mat().max_abs(), s.h.mat().max_abs()});
    scale = scale * scale * scale * scale;
    if (!residual_ok(rel, scale * scale, tol)) {
      std::cerr << "unfolded representation violates the relation\n";
      rc = 1;
      return;
    }
    nlohmann::json out;
    out["curve"] = nlohmann::json::parse(wcv::to_json_string(uc.curve));
    out["rep"] = nlohmann::json::parse(wcv::to_json_string(uc.rep));
    emit(cu_out, out.dump(2));
  });

  // ---- random-point: sample a chart point of a model ----
  auto* sc_rand = app.add_subcommand(
      "random-point", "sample a random point of a space model");
  std::string rp_model, rp_out, rp_mode = "exact";
  std::uint64_t rp_seed = 1;
  sc_rand->add_option("--model", rp_model, "space model JSON")->required();
  sc_rand->add_option("--seed", rp_seed, "sampler seed")->capture_default_str();
  sc_rand->add_option("--mode", rp_mode, "exact|float (when the model fixes none)")
      ->capture_default_str();
  sc_rand->add_option("--out", rp_out, "output file (default stdout)");
  sc_rand->callback([&] {
    wcv::SpaceModel model = wcv::space_model_from_json(slurp(rp_model));
    wcv::Mode mode = wcv::model_mode(model).value_or(parse_mode(rp_mode));
    wcv::Rng rng(rp_seed);
    wcv::SpacePoint pt = wcv::random_point(rng, model, mode);
    emit(rp_out, wcv::to_json_string(pt, 2));
  });

  // ---- verify: randomized identity sweeps ----
  auto* sc_verify = app.add_subcommand(
      "verify", "randomized verification of the structural identities");
  std::string ve_suite = "all", ve_mode = "exact";
  wcv::VerifyOptions vo;
  sc_verify->add_option("--suite", ve_suite, "all|qh2|triangular|unfold|wcv")
      ->capture_default_str();
  sc_verify->add_option("--mode", ve_mode, "exact|float")->capture_default_str();
  sc_verify->add_option("--seed", vo.seed, "base seed")->capture_default_str();
  sc_verify->add_option("--trials", vo.trials, "trials per suite")
      ->capture_default_str();
  sc_verify->add_option("--max-n", vo.max_n, "largest group rank")
      ->capture_default_str();
  sc_verify->callback([&] {
    vo.mode = parse_mode(ve_mode);
    vo.tol.identity = tol_identity;
    std::vector<wcv::VerifyReport> reports;
    if (ve_suite == "all")
      reports = wcv::verify_all(vo);
    else if (ve_suite == "qh2")
      reports = {wcv::verify_qh2(vo)};
    else if (ve_suite == "triangular")
      reports = {wcv::verify_triangular(vo)};
    else if (ve_suite == "unfold")
      reports = {wcv::verify_unfold(vo)};
    else if (ve_suite == "wcv")
      reports = {wcv::verify_wcv(vo)};
    else
      throw wcv::validation_error("unknown suite " + ve_suite);
    for (const auto& r : reports) {
      std::cout << r.suite << ": " << r.checks << " checks, "
                << r.failures.size() << " failures"
                << (r.ok() ? "" : "  [FAIL]") << "\n";
      for (const auto& f : r.failures) std::cout << "  " << f << "\n";
      if (!r.ok()) rc = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const wcv::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
