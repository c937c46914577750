#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mwt/common.hpp"
#include "mwt/czdecomp.hpp"
#include "mwt/czo.hpp"
#include "mwt/families.hpp"
#include "mwt/harness.hpp"
#include "mwt/orlicz.hpp"
#include "mwt/weights.hpp"
#include "mwt/young.hpp"

namespace {

using nlohmann::ordered_json;

// Exit codes: 0 success, 1 a measured inequality or verification failed,
// 2 config / usage / IO trouble.
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return kOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot open '%s' for writing\n", out_path.c_str());
    return kUsage;
  }
  out << text;
  return out.good() ? kOk : kUsage;
}

mwt::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mwt::contract_error("cannot read config file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw mwt::contract_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return mwt::config_from_json(j);
}

mwt::DyadicCube parse_cube(const std::string& text) {
  const std::size_t comma = text.find(',');
  mwt::require(comma != std::string::npos, "cube must be 'level,index'");
  try {
    return mwt::DyadicCube{std::stoi(text.substr(0, comma)),
                           std::stoll(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw mwt::contract_error("cube must be 'level,index', got '" + text + "'");
  }
}

mwt::WeightReport class_constant(const std::string& cls, const mwt::SampledFunction& w,
                                 const mwt::SampledFunction* base) {
  if (cls == "BMO") {
    mwt::require(base == nullptr, "BMO takes no base weight");
    return mwt::bmo_norm(w);
  }
  if (cls == "RHinf") {
    mwt::require(base == nullptr, "reverse Holder takes no base weight");
    return mwt::rh_constant(w, std::numeric_limits<double>::infinity());
  }
  const auto tail_number = [&](std::size_t skip) {
    try {
      std::size_t used = 0;
      const double value = std::stod(cls.substr(skip), &used);
      if (used != cls.size() - skip) throw std::invalid_argument(cls);
      return value;
    } catch (const std::exception&) {
      throw mwt::contract_error("weight class must be A<p>, RH<s>, RHinf, or BMO, got '" +
                                cls + "'");
    }
  };
  if (cls.size() > 2 && cls.compare(0, 2, "RH") == 0) {
    mwt::require(base == nullptr, "reverse Holder takes no base weight");
    return mwt::rh_constant(w, tail_number(2));
  }
  if (cls.size() > 1 && cls[0] == 'A') {
    const double p = tail_number(1);
    return base ? mwt::ap_constant(w, p, *base) : mwt::ap_constant(w, p);
  }
  throw mwt::contract_error("weight class must be A<p>, RH<s>, RHinf, or BMO, got '" + cls +
                            "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int run_verify(const std::string& cfg_path, const std::string& out_path, bool as_csv) {
  const mwt::ExperimentConfig cfg = load_config(cfg_path);
  const mwt::InequalityReport rep = mwt::run_experiment(cfg);
  const int wrote =
      emit(as_csv ? mwt::report_to_csv(rep) : dump(mwt::report_to_json(rep)), out_path);
  if (wrote != kOk) return wrote;
  return rep.ok ? kOk : kViolation;
}

int run_constants(const std::string& weight, const std::string& cls, int levels,
                  const std::string& base, const std::string& out_path) {
  const mwt::Grid g = mwt::make_grid(0.0, 1.0, levels);
  const mwt::SampledFunction w = mwt::parse_weight(g, weight);
  mwt::SampledFunction base_fn;
  const bool has_base = !base.empty();
  if (has_base) base_fn = mwt::parse_weight(g, base);
  const mwt::WeightReport rep = class_constant(cls, w, has_base ? &base_fn : nullptr);

  ordered_json j;
  j["weight"] = weight;
  if (has_base) j["base"] = base;
  j["levels"] = levels;
  j["class"] = rep.class_name;
  j["constant"] = rep.constant;
  j["witness"] = mwt::cube_label(rep.witness);
  j["levels_scanned"] = rep.levels_scanned;
  const int wrote = emit(dump(j), out_path);
  if (wrote != kOk) return wrote;
  return std::isfinite(rep.constant) ? kOk : kViolation;
}

int run_decompose(const std::string& f_spec, double scale, const std::string& v_spec,
                  double lambda, int levels, const std::string& out_path) {
  const mwt::Grid g = mwt::make_grid(0.0, 1.0, levels);
  mwt::SampledFunction f = mwt::parse_function(g, f_spec);
  for (auto& x : f.values) x *= scale;
  const mwt::SampledFunction v = mwt::parse_weight(g, v_spec);
  const mwt::Decomposition d = mwt::cz_decompose(f, v, lambda);
  const mwt::DecompositionReport rep = mwt::verify_decomposition(d, f, v);

  ordered_json j;
  j["f"] = f_spec;
  j["scale"] = scale;
  j["v"] = v_spec;
  j["lambda"] = lambda;
  j["levels"] = levels;
  ordered_json cubes = ordered_json::array();
  for (const auto& q : d.cubes) cubes.push_back(mwt::cube_label(q));
  j["cubes"] = std::move(cubes);
  j["weighted_averages"] = d.weighted_averages;
  j["doubling_constant"] = d.doubling_constant;
  j["root_selected"] = d.root_selected;
  j["floor_saturated"] = d.floor_saturated;
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(
        ordered_json{{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}});
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = rep.all_pass;
  const int wrote = emit(dump(j), out_path);
  if (wrote != kOk) return wrote;
  return rep.all_pass ? kOk : kViolation;
}

int run_maximal(const std::string& f_spec, const std::string& w_spec,
                const std::string& phi_spec, int levels, const std::string& out_path) {
  const mwt::Grid g = mwt::make_grid(0.0, 1.0, levels);
  const mwt::SampledFunction f = mwt::parse_function(g, f_spec);
  const mwt::SampledFunction w = mwt::parse_weight(g, w_spec);
  const mwt::SampledFunction m = mwt::maximal_function(f, w, mwt::parse_young(phi_spec));

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const double x : m.values) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  ordered_json j;
  j["f"] = f_spec;
  j["w"] = w_spec;
  j["phi"] = phi_spec;
  j["levels"] = levels;
  j["min"] = lo;
  j["max"] = hi;
  j["values"] = m.values;
  return emit(dump(j), out_path);
}

int run_luxemburg(const std::string& f_spec, const std::string& w_spec,
                  const std::string& phi_spec, int levels, const std::string& cube_spec,
                  const std::string& out_path) {
  const mwt::Grid g = mwt::make_grid(0.0, 1.0, levels);
  const mwt::SampledFunction f = mwt::parse_function(g, f_spec);
  const mwt::SampledFunction w = mwt::parse_weight(g, w_spec);
  const mwt::YoungFunction phi = mwt::parse_young(phi_spec);
  const mwt::DyadicCube q = parse_cube(cube_spec);
  mwt::check_cube(g, q);

  ordered_json j;
  j["f"] = f_spec;
  j["w"] = w_spec;
  j["phi"] = phi_spec;
  j["levels"] = levels;
  j["cube"] = mwt::cube_label(q);
  j["norm"] = mwt::luxemburg_norm(f, w, q, phi);
  j["infimum_form"] = mwt::luxemburg_infimum_form(f, w, q, phi);
  return emit(dump(j), out_path);
}

int run_transform(const std::string& f_spec, const std::string& b_spec, int m, int eta,
                  int levels, double lo, double hi, const std::string& out_path) {
  mwt::require(hi > lo, "domain needs hi > lo");
  const mwt::Grid g = mwt::make_grid(lo, hi, levels);
  const mwt::SampledFunction f = mwt::parse_function(g, f_spec);
  const mwt::KernelSpec kernel{mwt::KernelKind::hilbert, eta};
  mwt::SampledFunction out;
  if (m == 0) {
    out = mwt::apply_czo(f, kernel);
  } else {
    const mwt::SampledFunction b = mwt::parse_function(g, b_spec);
    out = mwt::commutator(f, b, m, kernel);
  }

  ordered_json j;
  j["f"] = f_spec;
  if (m > 0) j["b"] = b_spec;
  j["m"] = m;
  j["eta"] = eta;
  j["levels"] = levels;
  j["lo"] = lo;
  j["hi"] = hi;
  j["values"] = out.values;
  return emit(dump(j), out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic harness for weighted maximal and singular-integral bounds"};
  app.require_subcommand(1);
  int code = kOk;

  std::string theorem_list;
  for (const std::string& id : mwt::known_theorems()) {
    if (!theorem_list.empty()) theorem_list += ", ";
    theorem_list += id;
  }

  auto* verify = app.add_subcommand(
      "verify", "run an experiment config and emit its JSON report (ids: " + theorem_list + ")");
  std::string verify_cfg, verify_out;
  verify->add_option("--config", verify_cfg, "experiment config JSON file")->required();
  verify->add_option("--out", verify_out, "write the report here instead of stdout");
  verify->callback([&] { code = run_verify(verify_cfg, verify_out, false); });

  auto* report = app.add_subcommand("report", "run an experiment config and emit the flat CSV");
  std::string report_cfg, report_out;
  report->add_option("--config", report_cfg, "experiment config JSON file")->required();
  report->add_option("--out", report_out, "write the table here instead of stdout");
  report->callback([&] { code = run_verify(report_cfg, report_out, true); });

  auto* constants = app.add_subcommand("constants", "weight class constant with its witness cube");
  std::string cons_weight, cons_class, cons_base, cons_out;
  int cons_levels = 12;
  constants->add_option("--weight", cons_weight, "weight family string")->required();
  constants->add_option("--class", cons_class, "A<p>, RH<s>, RHinf, or BMO")->required();
  constants->add_option("--levels", cons_levels, "grid resolution (default 12)");
  constants->add_option("--base", cons_base, "base weight for the two-weight class");
  constants->add_option("--out", cons_out, "write the result here instead of stdout");
  constants->callback(
      [&] { code = run_constants(cons_weight, cons_class, cons_levels, cons_base, cons_out); });

  auto* decompose =
      app.add_subcommand("decompose", "stopping-time decomposition with full verification");
  std::string dec_f, dec_v = "const:1", dec_out;
  double dec_scale = 1.0, dec_lambda = 1.0;
  int dec_levels = 10;
  decompose->add_option("--f", dec_f, "function family string")->required();
  decompose->add_option("--scale", dec_scale, "multiplier applied to f (default 1)");
  decompose->add_option("--v", dec_v, "weight family string (default const:1)");
  decompose->add_option("--lambda", dec_lambda, "stopping level")->required();
  decompose->add_option("--levels", dec_levels, "grid resolution (default 10)");
  decompose->add_option("--out", dec_out, "write the result here instead of stdout");
  decompose->callback(
      [&] { code = run_decompose(dec_f, dec_scale, dec_v, dec_lambda, dec_levels, dec_out); });

  auto* maximal = app.add_subcommand("maximal", "weighted maximal function samples");
  std::string max_f, max_w = "const:1", max_phi = "identity", max_out;
  int max_levels = 10;
  maximal->add_option("--f", max_f, "function family string")->required();
  maximal->add_option("--w", max_w, "weight family string (default const:1)");
  maximal->add_option("--phi", max_phi, "gauge spec (default identity)");
  maximal->add_option("--levels", max_levels, "grid resolution (default 10)");
  maximal->add_option("--out", max_out, "write the result here instead of stdout");
  maximal->callback([&] { code = run_maximal(max_f, max_w, max_phi, max_levels, max_out); });

  auto* luxemburg = app.add_subcommand("luxemburg", "gauge average of f on one dyadic cube");
  std::string lux_f, lux_w = "const:1", lux_phi = "identity", lux_cube = "0,0", lux_out;
  int lux_levels = 10;
  luxemburg->add_option("--f", lux_f, "function family string")->required();
  luxemburg->add_option("--w", lux_w, "weight family string (default const:1)");
  luxemburg->add_option("--phi", lux_phi, "gauge spec (default identity)");
  luxemburg->add_option("--levels", lux_levels, "grid resolution (default 10)");
  luxemburg->add_option("--cube", lux_cube, "dyadic cube 'level,index' (default 0,0)");
  luxemburg->add_option("--out", lux_out, "write the result here instead of stdout");
  luxemburg->callback(
      [&] { code = run_luxemburg(lux_f, lux_w, lux_phi, lux_levels, lux_cube, lux_out); });

  auto* transform = app.add_subcommand("transform", "truncated singular integral or its bracket");
  std::string tr_f, tr_b = "logbmo:0.5", tr_out;
  int tr_m = 0, tr_eta = 1, tr_levels = 10;
  double tr_lo = 0.0, tr_hi = 1.0;
  transform->add_option("--f", tr_f, "function family string")->required();
  transform->add_option("--b", tr_b, "symbol family for m >= 1 (default logbmo:0.5)");
  transform->add_option("--m", tr_m, "bracket order (default 0 = plain transform)");
  transform->add_option("--eta", tr_eta, "truncation radius in cells (default 1)");
  transform->add_option("--levels", tr_levels, "grid resolution (default 10)");
  transform->add_option("--lo", tr_lo, "domain left end (default 0)");
  transform->add_option("--hi", tr_hi, "domain right end (default 1)");
  transform->add_option("--out", tr_out, "write the result here instead of stdout");
  transform->callback(
      [&] { code = run_transform(tr_f, tr_b, tr_m, tr_eta, tr_levels, tr_lo, tr_hi, tr_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const mwt::contract_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const mwt::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kUsage;
  }
  return code;
}
