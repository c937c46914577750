#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwt/lattice.hpp"

namespace mwt {

// One experiment: a named inequality, the grid resolution, the exponents, and
// the function/weight/gauge families it is evaluated on.  Fields not used by a
// given inequality are ignored but still echoed into the report.
struct ExperimentConfig {
  std::string theorem;        // see known_theorems()
  int levels = 10;            // grid is [0,1) with 2^levels cells
  double p = 1.2;
  double q = 2.0;
  double eps = 1.0;
  double delta = 0.5;
  int m = 0;                  // commutator order / iteration depth
  std::string f = "bump:0.5,0.1";
  double f_scale = 1.0;
  std::string u = "const:1";
  std::string v = "const:1";
  std::string w = "const:1";
  std::string b = "logbmo:0.5";
  std::string phi = "identity";
  std::string psi = "identity";
  std::string theta = "logbump:1,1";
  double lambda_lo = 1.0 / 256.0;  // geometric level sweep for weak-type runs
  double lambda_hi = 256.0;
  int lambda_points = 33;
  std::uint64_t seed = 1;          // drives randomized placements only
  std::string exponent_knob = "q";  // "q" -> v^(1-q) base, "qprime" -> v^(1-q')
};

std::vector<std::string> known_theorems();

// Strict decode: unknown keys and wrong value types are contract errors, so a
// typo in a config file fails loudly instead of running the default.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
// Full echo with every default expanded.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
// Theorem-specific parameter ranges; throws contract_error with the reason.
void validate_config(const ExperimentConfig& cfg);

struct SweepPoint {
  std::string label;
  double lambda = 0.0;  // 0 when the point is not part of a level sweep
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;   // lhs / rhs, 0 when rhs == 0
};

struct InequalityReport {
  std::string theorem;
  ExperimentConfig config;
  std::string reduction = "max";  // how best_constant summarizes the points
  std::vector<SweepPoint> points;
  double best_constant = 0.0;
  std::string attaining;           // label of the point realizing the reduction
  long long zero_rhs_points = 0;   // excluded from the reduction
  long long violations = 0;        // zero RHS against strictly positive LHS
  int refined_levels = 0;          // the rerun one level finer
  double refined_constant = 0.0;
  double stability_ratio = 1.0;    // max of the two constants over the other
  nlohmann::ordered_json extra;    // per-theorem side measurements
  bool ok = false;
};

// Runs the experiment at cfg.levels, reruns the reduction at cfg.levels + 1
// for the stability record, and never rounds in between.  Pure function of
// the config: equal configs give equal reports.
InequalityReport run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json report_to_json(const InequalityReport& rep);
// Flat table, one row per sweep point, every number in full precision.
std::string report_to_csv(const InequalityReport& rep);

}  // namespace mwt
