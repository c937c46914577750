#include "mwt/weights.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

namespace {

std::vector<double> num_args(const std::string& text, std::size_t expected,
                             const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw contract_error("bad number '" + piece + "' in " + what);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw contract_error(what + " expects " + std::to_string(expected) + " argument(s)");
  return out;
}

struct LevelScan {
  double best = -std::numeric_limits<double>::infinity();
  DyadicCube witness{0, 0};
  void offer(double value, int level, long long index) {
    if (value > best) {
      best = value;
      witness = DyadicCube{level, index};
    }
  }
};

void halve_sum(std::vector<double>& v) {
  const std::size_t half = v.size() / 2;
  for (std::size_t j = 0; j < half; ++j) v[j] = v[2 * j] + v[2 * j + 1];
  v.resize(half);
}

void halve_min(std::vector<double>& v) {
  const std::size_t half = v.size() / 2;
  for (std::size_t j = 0; j < half; ++j) v[j] = std::min(v[2 * j], v[2 * j + 1]);
  v.resize(half);
}

void halve_max(std::vector<double>& v) {
  const std::size_t half = v.size() / 2;
  for (std::size_t j = 0; j < half; ++j) v[j] = std::max(v[2 * j], v[2 * j + 1]);
  v.resize(half);
}

}  // namespace

double conjugate_exponent(double p) {
  require(std::isfinite(p) && p > 1.0, "conjugate exponent needs p > 1");
  return p / (p - 1.0);
}

WeightReport ap_constant(const SampledFunction& w, double p, const SampledFunction& u) {
  check_weight(w);
  check_weight(u);
  check_same_grid(w, u);
  require(std::isfinite(p) && p >= 1.0, "ap constant needs p >= 1");

  const long long n = w.grid.cells();
  const bool first_order = p == 1.0;
  const double dual_pow = first_order ? 0.0 : 1.0 - conjugate_exponent(p);

  std::vector<double> su(static_cast<std::size_t>(n));
  std::vector<double> swu(static_cast<std::size_t>(n));
  std::vector<double> second(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    su[k] = u.values[k];
    swu[k] = w.values[k] * u.values[k];
    second[k] = first_order ? w.values[k] : std::pow(w.values[k], dual_pow) * u.values[k];
  }

  LevelScan scan;
  for (int lev = w.grid.levels;; --lev) {
    const long long cnt = static_cast<long long>(su.size());
    for (long long j = 0; j < cnt; ++j) {
      const std::size_t k = static_cast<std::size_t>(j);
      const double avg_w = swu[k] / su[k];
      const double value = first_order
                               ? avg_w / second[k]
                               : avg_w * std::pow(second[k] / su[k], p - 1.0);
      scan.offer(value, lev, j);
    }
    if (lev == 0) break;
    halve_sum(su);
    halve_sum(swu);
    if (first_order)
      halve_min(second);
    else
      halve_sum(second);
  }

  WeightReport rep;
  rep.class_name = first_order ? "A1(u)" : "Ap(" + format_double(p) + ",u)";
  rep.constant = scan.best;
  rep.witness = scan.witness;
  rep.levels_scanned = w.grid.levels + 1;
  return rep;
}

WeightReport ap_constant(const SampledFunction& w, double p) {
  WeightReport rep = ap_constant(w, p, constant_function(w.grid, 1.0));
  rep.class_name = p == 1.0 ? "A1" : "Ap(" + format_double(p) + ")";
  return rep;
}

WeightReport rh_constant(const SampledFunction& w, double s) {
  check_weight(w);
  const bool sup_form = std::isinf(s);
  require(sup_form || (std::isfinite(s) && s > 1.0),
          "reverse Holder exponent must be > 1 or infinity");

  const long long n = w.grid.cells();
  std::vector<double> sw(static_cast<std::size_t>(n));
  std::vector<double> power_or_max(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    sw[k] = w.values[k];
    power_or_max[k] = sup_form ? w.values[k] : std::pow(w.values[k], s);
  }

  LevelScan scan;
  long long cells_per_cube = 1;
  for (int lev = w.grid.levels;; --lev) {
    const long long cnt = static_cast<long long>(sw.size());
    for (long long j = 0; j < cnt; ++j) {
      const std::size_t k = static_cast<std::size_t>(j);
      const double avg = sw[k] / static_cast<double>(cells_per_cube);
      const double value =
          sup_form ? power_or_max[k] / avg
                   : std::pow(power_or_max[k] / static_cast<double>(cells_per_cube), 1.0 / s) / avg;
      scan.offer(value, lev, j);
    }
    if (lev == 0) break;
    halve_sum(sw);
    if (sup_form)
      halve_max(power_or_max);
    else
      halve_sum(power_or_max);
    cells_per_cube *= 2;
  }

  WeightReport rep;
  rep.class_name = sup_form ? "RHinf" : "RHs(" + format_double(s) + ")";
  rep.constant = scan.best;
  rep.witness = scan.witness;
  rep.levels_scanned = w.grid.levels + 1;
  return rep;
}

WeightReport bmo_norm(const SampledFunction& b) {
  check_sampled(b);
  const Grid& grid = b.grid;
  const long long n = grid.cells();
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + b.values[static_cast<std::size_t>(i)];

  LevelScan scan;
  scan.best = 0.0;  // oscillation is nonnegative; keep the root as default witness
  for (int lev = 0; lev <= grid.levels; ++lev) {
    const long long cnt = 1LL << lev;
    for (long long j = 0; j < cnt; ++j) {
      const CellRange r = cube_cells(grid, DyadicCube{lev, j});
      const double count = static_cast<double>(r.count());
      const double avg =
          (prefix[static_cast<std::size_t>(r.end)] - prefix[static_cast<std::size_t>(r.begin)]) /
          count;
      double osc = 0.0;
      for (long long i = r.begin; i < r.end; ++i)
        osc += std::abs(b.values[static_cast<std::size_t>(i)] - avg);
      scan.offer(osc / count, lev, j);
    }
  }

  WeightReport rep;
  rep.class_name = "BMO";
  rep.constant = scan.best;
  rep.witness = scan.witness;
  rep.levels_scanned = grid.levels + 1;
  return rep;
}

double telescoping_check(const SampledFunction& b, const DyadicCube& Q, int kmax) {
  check_sampled(b);
  check_cube(b.grid, Q);
  require(kmax >= 1, "telescoping check needs kmax >= 1");
  require(kmax <= Q.level, "ancestor walk would leave the domain");

  const double bmo = bmo_norm(b).constant;
  if (bmo == 0.0) return 0.0;

  const Grid& grid = b.grid;
  const long long n = grid.cells();
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + b.values[static_cast<std::size_t>(i)];
  const auto avg_on = [&](const DyadicCube& cube) {
    const CellRange r = cube_cells(grid, cube);
    return (prefix[static_cast<std::size_t>(r.end)] -
            prefix[static_cast<std::size_t>(r.begin)]) /
           static_cast<double>(r.count());
  };

  const double base = avg_on(Q);
  double worst = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double up = avg_on(ancestor(Q, k));
    worst = std::max(worst, std::abs(base - up) / (static_cast<double>(k) * bmo));
  }
  return worst;
}

SampledFunction power_weight(const Grid& grid, double a, double x0) {
  require(std::isfinite(a), "power weight exponent must be finite");
  require(std::isfinite(x0) && x0 >= grid.lo && x0 <= grid.hi,
          "power weight center must lie in the closed domain");
  SampledFunction out;
  out.grid = grid;
  const long long n = grid.cells();
  out.values.resize(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double v = std::pow(std::abs(grid.midpoint(i) - x0), a);
    require(std::isfinite(v), "power weight overflows at a midpoint");
    out.values[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

SampledFunction parse_weight(const Grid& grid, const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (head == "const") {
    const auto a = num_args(rest, 1, "const weight");
    return constant_function(grid, a[0]);
  }
  if (head == "power") {
    const auto a = num_args(rest, 2, "power weight");
    return power_weight(grid, a[0], a[1]);
  }
  if (head == "logbmo") {
    const auto a = num_args(rest, 1, "logbmo symbol");
    const double x0 = a[0];
    require(std::isfinite(x0) && x0 >= grid.lo && x0 <= grid.hi,
            "logbmo center must lie in the closed domain");
    SampledFunction out;
    out.grid = grid;
    const long long n = grid.cells();
    out.values.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      const double d = std::abs(grid.midpoint(i) - x0);
      require(d > 0.0, "logbmo center coincides with a midpoint");
      out.values[static_cast<std::size_t>(i)] = -std::log(d);
    }
    return out;
  }
  if (head == "random") {
    const auto a = num_args(rest, 2, "random weight");
    require(a[0] >= 0.0 && a[0] == std::floor(a[0]), "random weight seed must be a whole number");
    const double smooth = a[1];
    require(std::isfinite(smooth) && smooth >= 0.0, "random weight smoothness must be >= 0");
    DetRng rng(static_cast<std::uint64_t>(a[0]));
    constexpr int modes = 16;
    double coef_cos[modes];
    double coef_sin[modes];
    for (int j = 0; j < modes; ++j) {
      coef_cos[j] = rng.uniform(-1.0, 1.0);
      coef_sin[j] = rng.uniform(-1.0, 1.0);
    }
    SampledFunction out;
    out.grid = grid;
    const long long n = grid.cells();
    out.values.resize(static_cast<std::size_t>(n));
    const double span = grid.hi - grid.lo;
    for (long long i = 0; i < n; ++i) {
      const double x = (grid.midpoint(i) - grid.lo) / span;
      double field = 0.0;
      for (int j = 0; j < modes; ++j) {
        const double amp = std::pow(static_cast<double>(j + 1), -smooth);
        const double arg = 2.0 * 3.14159265358979323846 * (j + 1) * x;
        field += amp * (coef_cos[j] * std::cos(arg) + coef_sin[j] * std::sin(arg));
      }
      out.values[static_cast<std::size_t>(i)] = std::exp(field);
    }
    return out;
  }
  throw contract_error("unknown weight family '" + head +
                       "' (const, power, logbmo, random)");
}

}  // namespace mwt
