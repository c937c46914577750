#include "mwt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mwt/common.hpp"
#include "mwt/czo.hpp"
#include "mwt/families.hpp"
#include "mwt/orlicz.hpp"
#include "mwt/weights.hpp"
#include "mwt/young.hpp"

namespace mwt {

namespace {

using nlohmann::ordered_json;

const char* const kTheorems[] = {
    "strong_fs",
    "mixed_weak_czo",
    "mixed_weak_commutator",
    "maximal_weak_type",
    "composition",
    "a1_self_improve",
    "pointwise_two_weight",
    "a_infty_membership",
    "coifman",
    "coifman_commutator",
    "bp_maximal_characterization",
    "localization",
};

bool known_theorem(const std::string& id) {
  for (const char* t : kTheorems)
    if (id == t) return true;
  return false;
}

std::vector<double> lambda_grid(const ExperimentConfig& cfg) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.lambda_points));
  if (cfg.lambda_points == 1) {
    out.push_back(cfg.lambda_lo);
    return out;
  }
  const double step = std::log(cfg.lambda_hi / cfg.lambda_lo) /
                      static_cast<double>(cfg.lambda_points - 1);
  for (int k = 0; k < cfg.lambda_points; ++k)
    out.push_back(cfg.lambda_lo * std::exp(step * static_cast<double>(k)));
  return out;
}

// 1 - q or 1 - q' depending on the knob; the base-measure exponent every
// weighted maximal in the weak and strong runs is built with.
double base_exponent(const ExperimentConfig& cfg) {
  return cfg.exponent_knob == "q" ? 1.0 - cfg.q : 1.0 - conjugate_exponent(cfg.q);
}

SampledFunction scaled_function(const Grid& g, const std::string& spec, double scale) {
  SampledFunction f = parse_function(g, spec);
  for (auto& x : f.values) x *= scale;
  return f;
}

struct EvalResult {
  std::vector<SweepPoint> points;
  std::string reduction = "max";
  ordered_json extra = ordered_json::object();
};

SweepPoint make_point(std::string label, double lambda, double lhs, double rhs) {
  SweepPoint pt;
  pt.label = std::move(label);
  pt.lambda = lambda;
  pt.lhs = lhs;
  pt.rhs = rhs;
  pt.ratio = rhs == 0.0 ? 0.0 : lhs / rhs;
  return pt;
}

EvalResult eval_strong(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction v = parse_weight(g, cfg.v);
  const SampledFunction w = parse_weight(g, cfg.w);
  const SampledFunction b = parse_function(g, cfg.b);
  const SampledFunction sigma = pow_function(v, base_exponent(cfg));
  const YoungFunction gauge = YoungFunction::log_bump(1.0, static_cast<double>(cfg.m) + cfg.eps);
  const SampledFunction mw = maximal_function(w, sigma, gauge);
  const SampledFunction tb = commutator(f, b, cfg.m, KernelSpec{});
  const SampledFunction vp = pow_function(v, 1.0 - cfg.p);

  const double h = g.h();
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    lhs += std::pow(std::abs(tb.values[i]), cfg.p) * w.values[i] * vp.values[i] * h;
    rhs += std::pow(std::abs(f.values[i]), cfg.p) * mw.values[i] * vp.values[i] * h;
  }
  EvalResult r;
  r.points.push_back(make_point("integral", 0.0, lhs, rhs));
  return r;
}

EvalResult eval_mixed(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction u = parse_weight(g, cfg.u);
  const SampledFunction v = parse_weight(g, cfg.v);
  const SampledFunction b = parse_function(g, cfg.b);
  const SampledFunction sigma = pow_function(v, base_exponent(cfg));
  const YoungFunction gauge = YoungFunction::log_bump(1.0, static_cast<double>(cfg.m) + cfg.eps);
  const SampledFunction mu = maximal_function(u, sigma, gauge);
  const SampledFunction tb = commutator(product(f, v), b, cfg.m, KernelSpec{});

  EvalResult r;
  double bnorm = 0.0;
  if (cfg.m >= 1) {
    bnorm = bmo_norm(b).constant;
    r.extra["symbol_oscillation"] = bnorm;
  }
  const YoungFunction level_gauge = YoungFunction::log_bump(1.0, static_cast<double>(cfg.m));
  const double h = g.h();
  const double bpow = cfg.m >= 1 ? std::pow(bnorm, static_cast<double>(cfg.m)) : 1.0;
  for (const double lambda : lambda_grid(cfg)) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (std::abs(tb.values[i]) / v.values[i] > lambda)
        lhs += u.values[i] * v.values[i] * h;
      if (cfg.m == 0)
        rhs += std::abs(f.values[i]) / lambda * mu.values[i] * v.values[i] * h;
      else
        rhs += level_gauge(bpow * std::abs(f.values[i]) / lambda) * mu.values[i] *
               v.values[i] * h;
    }
    r.points.push_back(make_point("lambda=" + format_double(lambda), lambda, lhs, rhs));
  }
  return r;
}

EvalResult eval_maximal_weak(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction w = parse_weight(g, cfg.w);
  const YoungFunction phi = parse_young(cfg.phi);
  const SampledFunction mf = maximal_function(f, w, phi);

  EvalResult r;
  const double h = g.h();
  for (const double lambda : lambda_grid(cfg)) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (mf.values[i] > lambda) lhs += w.values[i] * h;
      rhs += phi(std::abs(f.values[i]) / lambda) * w.values[i] * h;
    }
    r.points.push_back(make_point("lambda=" + format_double(lambda), lambda, lhs, rhs));
  }
  return r;
}

EvalResult eval_composition(const ExperimentConfig& cfg, int levels) {
  const YoungFunction phi = parse_young(cfg.phi);
  const YoungFunction psi = parse_young(cfg.psi);
  const YoungFunction theta = parse_young(cfg.theta);
  const DominationVerdict dom =
      check_domination(YoungFunction::theta_compose(phi, psi), theta);
  require(dom.dominated,
          "theta does not dominate the composed gauge (witness t = " +
              format_double(dom.witness_t) + ")");

  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction w = parse_weight(g, cfg.w);
  const SampledFunction inner = maximal_function(f, w, phi);
  const SampledFunction outer = maximal_function(inner, w, psi);
  const SampledFunction target = maximal_function(f, w, theta);

  double best = -1.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < outer.values.size(); ++i) {
    if (target.values[i] == 0.0) continue;
    const double ratio = outer.values[i] / target.values[i];
    if (ratio > best) {
      best = ratio;
      at = i;
    }
  }
  EvalResult r;
  r.extra["domination"] = {{"a", dom.a}, {"b", dom.b}, {"t0", dom.t0}};
  if (best < 0.0)
    r.points.push_back(make_point("pointwise-sup", 0.0, 0.0, 0.0));
  else
    r.points.push_back(
        make_point("pointwise-sup", 0.0, outer.values[at], target.values[at]));
  return r;
}

EvalResult eval_a1_self_improve(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  bool nonzero = false;
  for (const double x : f.values) nonzero = nonzero || x != 0.0;
  require(nonzero, "flat-class self-improvement needs nonzero data");
  const SampledFunction ones = constant_function(g, 1.0);
  const SampledFunction mf = maximal_function(f, ones, parse_young(cfg.phi));
  const WeightReport rep = ap_constant(pow_function(mf, cfg.delta), 1.0);

  EvalResult r;
  r.extra["witness"] = cube_label(rep.witness);
  r.points.push_back(make_point("A1-constant", 0.0, rep.constant, 1.0));
  return r;
}

EvalResult eval_pointwise_two_weight(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction u = parse_weight(g, cfg.u);
  const SampledFunction v = parse_weight(g, cfg.v);
  const SampledFunction sigma = pow_function(v, base_exponent(cfg));
  const SampledFunction ones = constant_function(g, 1.0);
  const YoungFunction gauge = YoungFunction::log_bump(1.0, cfg.eps);
  const SampledFunction vp = pow_function(v, 1.0 - cfg.p);
  const SampledFunction lhs_m = maximal_function(product(u, vp), ones, gauge);
  const SampledFunction rhs_m = maximal_function(u, sigma, gauge);

  double best = -1.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double denom = vp.values[i] * rhs_m.values[i];
    if (denom == 0.0) continue;
    const double ratio = lhs_m.values[i] / denom;
    if (ratio > best) {
      best = ratio;
      at = i;
    }
  }
  EvalResult r;
  if (best < 0.0)
    r.points.push_back(make_point("pointwise-sup", 0.0, 0.0, 0.0));
  else
    r.points.push_back(make_point("pointwise-sup", 0.0, lhs_m.values[at],
                                  vp.values[at] * rhs_m.values[at]));
  return r;
}

EvalResult eval_a_infty(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction u = parse_weight(g, cfg.u);
  const SampledFunction v = parse_weight(g, cfg.v);
  const SampledFunction sigma = pow_function(v, base_exponent(cfg));
  const YoungFunction gauge = YoungFunction::log_bump(1.0, static_cast<double>(cfg.m) + cfg.eps);
  const SampledFunction mu = maximal_function(u, sigma, gauge);
  const double pp = conjugate_exponent(cfg.p);
  const SampledFunction built = product(pow_function(mu, 1.0 - pp), v);

  EvalResult r;
  r.reduction = "min";
  for (const double t : {pp + 0.5, pp + 1.0, 2.0 * pp}) {
    const WeightReport rep = ap_constant(built, t);
    r.points.push_back(make_point("t=" + format_double(t), 0.0, rep.constant, 1.0));
  }
  return r;
}

EvalResult eval_coifman(const ExperimentConfig& cfg, int levels, bool with_symbol) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction w = parse_weight(g, cfg.w);
  const SampledFunction ones = constant_function(g, 1.0);
  const int k = with_symbol ? cfg.m : 0;
  SampledFunction tb;
  if (with_symbol) {
    const SampledFunction b = parse_function(g, cfg.b);
    tb = commutator(f, b, k, KernelSpec{});
  } else {
    tb = apply_czo(f, KernelSpec{});
  }
  const SampledFunction mk = iterated_maximal(f, ones, k + 1);

  const double h = g.h();
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    lhs += std::pow(std::abs(tb.values[i]), cfg.p) * w.values[i] * h;
    rhs += std::pow(mk.values[i], cfg.p) * w.values[i] * h;
  }
  EvalResult r;
  r.points.push_back(make_point("integral", 0.0, lhs, rhs));
  return r;
}

EvalResult eval_bp_characterization(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction f = scaled_function(g, cfg.f, cfg.f_scale);
  const SampledFunction w = parse_weight(g, cfg.w);
  const SampledFunction ones = constant_function(g, 1.0);
  const YoungFunction phi = parse_young(cfg.phi);
  const YoungFunction id = YoungFunction::identity();

  const SampledFunction mf = maximal_function(f, ones, id);
  const SampledFunction mphi_w = maximal_function(w, ones, phi);
  const SampledFunction w_pm1 = pow_function(w, cfg.p - 1.0);
  const SampledFunction mphi_pm1 = pow_function(mphi_w, cfg.p - 1.0);

  EvalResult r;
  const BpVerdict bp = check_bp(phi, cfg.p);
  r.extra["gauge_in_bp"] = bp.in_bp;
  r.extra["bp_integral"] = bp.integral;
  r.extra["tail_slope"] = bp.tail_slope;

  const long long n = g.cells();
  const double h = g.h();
  for (const long long width : {16LL, 4LL, 1LL}) {
    const long long c0 = 3 * n / 4 - width / 2;
    SampledFunction u{g, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (long long i = c0; i < c0 + width; ++i) u.values[static_cast<std::size_t>(i)] = 1.0;
    const SampledFunction mu = maximal_function(u, ones, id);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      lhs += std::pow(mf.values[i], cfg.p) * u.values[i] / mphi_pm1.values[i] * h;
      rhs += std::pow(std::abs(f.values[i]), cfg.p) * mu.values[i] / w_pm1.values[i] * h;
    }
    r.points.push_back(make_point("width=" + std::to_string(width), 0.0, lhs, rhs));
  }
  return r;
}

EvalResult eval_localization(const ExperimentConfig& cfg, int levels) {
  const Grid g = make_grid(0.0, 1.0, levels);
  const SampledFunction w = parse_weight(g, cfg.w);
  const YoungFunction phi = parse_young(cfg.phi);
  const int qlevel = std::max(1, std::min(levels - 1, levels / 2));
  const DyadicCube Q{qlevel, std::int64_t{1} << (qlevel - 1)};
  const CellRange dil = dilated_cells(g, Q, 4.0);
  const long long outside = dil.begin + (g.cells() - dil.end);
  require(outside > 0, "localization needs cells outside the dilated cube");

  EvalResult r;
  DetRng rng(cfg.seed);
  for (int trial = 0; trial < 20; ++trial) {
    long long pick = static_cast<long long>(rng.uniform() * static_cast<double>(outside));
    pick = std::min(pick, outside - 1);
    const long long cell = pick < dil.begin ? pick : dil.end + (pick - dil.begin);
    SampledFunction spike{g, std::vector<double>(static_cast<std::size_t>(g.cells()), 0.0)};
    spike.values[static_cast<std::size_t>(cell)] = 1.0;
    const LocalizationResult loc = localization_ratio(spike, w, phi, Q);
    r.points.push_back(
        make_point("spike=" + std::to_string(cell), 0.0, loc.ratio, 1.0));
  }
  return r;
}

EvalResult evaluate(const ExperimentConfig& cfg, int levels) {
  const std::string& id = cfg.theorem;
  if (id == "strong_fs") return eval_strong(cfg, levels);
  if (id == "mixed_weak_czo" || id == "mixed_weak_commutator") return eval_mixed(cfg, levels);
  if (id == "maximal_weak_type") return eval_maximal_weak(cfg, levels);
  if (id == "composition") return eval_composition(cfg, levels);
  if (id == "a1_self_improve") return eval_a1_self_improve(cfg, levels);
  if (id == "pointwise_two_weight") return eval_pointwise_two_weight(cfg, levels);
  if (id == "a_infty_membership") return eval_a_infty(cfg, levels);
  if (id == "coifman") return eval_coifman(cfg, levels, false);
  if (id == "coifman_commutator") return eval_coifman(cfg, levels, true);
  if (id == "bp_maximal_characterization") return eval_bp_characterization(cfg, levels);
  if (id == "localization") return eval_localization(cfg, levels);
  throw contract_error("unknown theorem id '" + id + "'");
}

struct Reduced {
  double best = 0.0;
  std::string attaining;
  long long zero_rhs = 0;
  long long violations = 0;
  bool any = false;
};

Reduced reduce_points(const std::vector<SweepPoint>& points, const std::string& reduction) {
  Reduced out;
  for (const SweepPoint& pt : points) {
    if (pt.rhs == 0.0) {
      ++out.zero_rhs;
      if (pt.lhs > 0.0) ++out.violations;
      continue;
    }
    const bool better = !out.any || (reduction == "min" ? pt.ratio < out.best
                                                        : pt.ratio > out.best);
    if (better) {
      out.best = pt.ratio;
      out.attaining = pt.label;
      out.any = true;
    }
  }
  return out;
}

void check_weight_family_stability(const ExperimentConfig& cfg) {
  // The substitution weight must stay a usable weight: finite reverse Holder
  // and dual-class constants that barely move under refinement.
  const double qp = conjugate_exponent(cfg.q);
  double prev_rh = 0.0, prev_ap = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const Grid g = make_grid(0.0, 1.0, cfg.levels + pass);
    const SampledFunction v = parse_weight(g, cfg.v);
    const double rh = rh_constant(v, std::numeric_limits<double>::infinity()).constant;
    const double ap = ap_constant(v, qp).constant;
    require(std::isfinite(rh) && std::isfinite(ap),
            "substitution weight has a non-finite class constant");
    if (pass == 1) {
      require(rh <= prev_rh * 1.5 && prev_rh <= rh * 1.5 && ap <= prev_ap * 1.5 &&
                  prev_ap <= ap * 1.5,
              "substitution weight class constants are unstable under refinement");
    }
    prev_rh = rh;
    prev_ap = ap;
  }
}

}  // namespace

std::vector<std::string> known_theorems() {
  return std::vector<std::string>(std::begin(kTheorems), std::end(kTheorems));
}

ExperimentConfig config_from_json(const ordered_json& j) {
  require(j.is_object(), "experiment config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    const ordered_json& val = item.value();
    const auto want_string = [&]() -> std::string {
      require(val.is_string(), "config key '" + key + "' must be a string");
      return val.get<std::string>();
    };
    const auto want_number = [&]() -> double {
      require(val.is_number(), "config key '" + key + "' must be a number");
      return val.get<double>();
    };
    const auto want_int = [&]() -> long long {
      require(val.is_number_integer(), "config key '" + key + "' must be an integer");
      return val.get<long long>();
    };
    if (key == "theorem") cfg.theorem = want_string();
    else if (key == "levels") cfg.levels = static_cast<int>(want_int());
    else if (key == "p") cfg.p = want_number();
    else if (key == "q") cfg.q = want_number();
    else if (key == "eps") cfg.eps = want_number();
    else if (key == "delta") cfg.delta = want_number();
    else if (key == "m") cfg.m = static_cast<int>(want_int());
    else if (key == "f") cfg.f = want_string();
    else if (key == "f_scale") cfg.f_scale = want_number();
    else if (key == "u") cfg.u = want_string();
    else if (key == "v") cfg.v = want_string();
    else if (key == "w") cfg.w = want_string();
    else if (key == "b") cfg.b = want_string();
    else if (key == "phi") cfg.phi = want_string();
    else if (key == "psi") cfg.psi = want_string();
    else if (key == "theta") cfg.theta = want_string();
    else if (key == "lambda_lo") cfg.lambda_lo = want_number();
    else if (key == "lambda_hi") cfg.lambda_hi = want_number();
    else if (key == "lambda_points") cfg.lambda_points = static_cast<int>(want_int());
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(want_int());
    else if (key == "exponent_knob") cfg.exponent_knob = want_string();
    else throw contract_error("unknown config key '" + key + "'");
  }
  return cfg;
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["theorem"] = cfg.theorem;
  j["levels"] = cfg.levels;
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["m"] = cfg.m;
  j["f"] = cfg.f;
  j["f_scale"] = cfg.f_scale;
  j["u"] = cfg.u;
  j["v"] = cfg.v;
  j["w"] = cfg.w;
  j["b"] = cfg.b;
  j["phi"] = cfg.phi;
  j["psi"] = cfg.psi;
  j["theta"] = cfg.theta;
  j["lambda_lo"] = cfg.lambda_lo;
  j["lambda_hi"] = cfg.lambda_hi;
  j["lambda_points"] = cfg.lambda_points;
  j["seed"] = cfg.seed;
  j["exponent_knob"] = cfg.exponent_knob;
  return j;
}

void validate_config(const ExperimentConfig& cfg) {
  require(known_theorem(cfg.theorem),
          "unknown theorem id '" + cfg.theorem + "'");
  require(cfg.levels >= 3 && cfg.levels <= 22, "levels must lie in [3, 22]");
  require(std::isfinite(cfg.f_scale) && cfg.f_scale >= 0.0, "f_scale must be >= 0");
  require(cfg.lambda_lo > 0.0 && std::isfinite(cfg.lambda_hi) &&
              cfg.lambda_hi >= cfg.lambda_lo,
          "the level sweep needs 0 < lambda_lo <= lambda_hi");
  require(cfg.lambda_points >= 1 && cfg.lambda_points <= 1025,
          "lambda_points must lie in [1, 1025]");
  require(cfg.exponent_knob == "q" || cfg.exponent_knob == "qprime",
          "exponent_knob must be 'q' or 'qprime'");

  const std::string& id = cfg.theorem;
  if (id == "strong_fs") {
    require(cfg.m >= 0, "commutator order must be >= 0");
    require(cfg.q > 1.0, "the substitution exponent q must exceed 1");
    require(cfg.eps > 0.0, "the gauge excess eps must be positive");
    const double cap = std::min(cfg.q, 1.0 + cfg.eps / static_cast<double>(cfg.m + 1));
    require(cfg.p > 1.0 && cfg.p < cap,
            "strong_fs needs 1 < p < min(q, 1 + eps/(m+1))");
  } else if (id == "mixed_weak_czo" || id == "mixed_weak_commutator") {
    require(cfg.q > 1.0, "the substitution exponent q must exceed 1");
    require(cfg.eps > 0.0, "the gauge excess eps must be positive");
    if (id == "mixed_weak_czo")
      require(cfg.m == 0, "mixed_weak_czo runs with m = 0");
    else
      require(cfg.m >= 1, "mixed_weak_commutator needs m >= 1");
    check_weight_family_stability(cfg);
  } else if (id == "maximal_weak_type") {
    parse_young(cfg.phi);
  } else if (id == "composition") {
    parse_young(cfg.phi);
    parse_young(cfg.psi);
    parse_young(cfg.theta);
  } else if (id == "a1_self_improve") {
    parse_young(cfg.phi);
    require(cfg.delta > 0.0 && cfg.delta < 1.0, "the damping power must lie in (0, 1)");
  } else if (id == "pointwise_two_weight") {
    require(cfg.q > 1.0 && cfg.p > 1.0 && cfg.p < cfg.q,
            "pointwise_two_weight needs 1 < p < q");
    require(cfg.eps > 0.0, "the gauge excess eps must be positive");
  } else if (id == "a_infty_membership") {
    require(cfg.q > 1.0 && cfg.p > 1.0 && cfg.p < cfg.q,
            "a_infty_membership needs 1 < p < q");
    require(cfg.eps > 0.0, "the gauge excess eps must be positive");
    require(cfg.m >= 0, "commutator order must be >= 0");
  } else if (id == "coifman") {
    require(cfg.p > 0.0, "coifman needs p > 0");
  } else if (id == "coifman_commutator") {
    require(cfg.p > 0.0, "coifman_commutator needs p > 0");
    require(cfg.m >= 1, "coifman_commutator needs m >= 1");
  } else if (id == "bp_maximal_characterization") {
    parse_young(cfg.phi);
    require(cfg.p > 1.0, "the characterization exponent must exceed 1");
    require(cfg.levels >= 6, "the spike sweep needs levels >= 6");
  } else if (id == "localization") {
    parse_young(cfg.phi);
    require(cfg.levels >= 4, "localization needs levels >= 4");
  }
}

InequalityReport run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  EvalResult main_run = evaluate(cfg, cfg.levels);
  EvalResult fine_run = evaluate(cfg, cfg.levels + 1);

  InequalityReport rep;
  rep.theorem = cfg.theorem;
  rep.config = cfg;
  rep.reduction = main_run.reduction;
  rep.points = std::move(main_run.points);
  rep.extra = std::move(main_run.extra);

  const Reduced main_red = reduce_points(rep.points, rep.reduction);
  const Reduced fine_red = reduce_points(fine_run.points, fine_run.reduction);
  rep.best_constant = main_red.best;
  rep.attaining = main_red.attaining;
  rep.zero_rhs_points = main_red.zero_rhs;
  rep.violations = main_red.violations + fine_red.violations;
  rep.refined_levels = cfg.levels + 1;
  rep.refined_constant = fine_red.best;
  rep.stability_ratio =
      (main_red.best > 0.0 && fine_red.best > 0.0)
          ? std::max(main_red.best / fine_red.best, fine_red.best / main_red.best)
          : 1.0;

  rep.ok = rep.violations == 0 && std::isfinite(rep.best_constant);
  if (cfg.theorem == "maximal_weak_type")
    rep.ok = rep.ok && rep.best_constant <= 1.0 + 1e-9;
  return rep;
}

ordered_json report_to_json(const InequalityReport& rep) {
  ordered_json j;
  j["theorem"] = rep.theorem;
  j["config"] = config_to_json(rep.config);
  j["reduction"] = rep.reduction;
  ordered_json pts = ordered_json::array();
  for (const SweepPoint& pt : rep.points) {
    ordered_json row;
    row["label"] = pt.label;
    row["lambda"] = pt.lambda;
    row["lhs"] = pt.lhs;
    row["rhs"] = pt.rhs;
    row["ratio"] = pt.ratio;
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  j["best_constant"] = rep.best_constant;
  j["attaining"] = rep.attaining;
  j["zero_rhs_points"] = rep.zero_rhs_points;
  j["violations"] = rep.violations;
  j["stability"] = {{"levels", rep.config.levels},
                    {"best_constant", rep.best_constant},
                    {"refined_levels", rep.refined_levels},
                    {"refined_constant", rep.refined_constant},
                    {"ratio", rep.stability_ratio}};
  if (!rep.extra.empty()) j["extra"] = rep.extra;
  j["ok"] = rep.ok;
  return j;
}

std::string report_to_csv(const InequalityReport& rep) {
  std::string out = "theorem,label,levels,p,q,eps,delta,m,lambda,lhs,rhs,ratio\n";
  for (const SweepPoint& pt : rep.points) {
    out += rep.theorem;
    out += ',';
    out += pt.label;
    out += ',';
    out += std::to_string(rep.config.levels);
    out += ',';
    out += format_double(rep.config.p);
    out += ',';
    out += format_double(rep.config.q);
    out += ',';
    out += format_double(rep.config.eps);
    out += ',';
    out += format_double(rep.config.delta);
    out += ',';
    out += std::to_string(rep.config.m);
    out += ',';
    out += format_double(pt.lambda);
    out += ',';
    out += format_double(pt.lhs);
    out += ',';
    out += format_double(pt.rhs);
    out += ',';
    out += format_double(pt.ratio);
    out += '\n';
  }
  return out;
}

}  // namespace mwt
