#include "mwt/czdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

namespace {

struct Prefix {
  std::vector<double> fv;  // running sum of f*v
  std::vector<double> v;   // running sum of v
};

Prefix build_prefix(const SampledFunction& f, const SampledFunction& v) {
  const long long n = f.grid.cells();
  Prefix p;
  p.fv.assign(static_cast<std::size_t>(n) + 1, 0.0);
  p.v.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    p.fv[k + 1] = p.fv[k] + f.values[k] * v.values[k];
    p.v[k + 1] = p.v[k] + v.values[k];
  }
  return p;
}

double range_avg(const Prefix& p, const CellRange& r) {
  const double num = p.fv[static_cast<std::size_t>(r.end)] - p.fv[static_cast<std::size_t>(r.begin)];
  const double den = p.v[static_cast<std::size_t>(r.end)] - p.v[static_cast<std::size_t>(r.begin)];
  return num / den;
}

double range_vmass(const Prefix& p, const CellRange& r) {
  return p.v[static_cast<std::size_t>(r.end)] - p.v[static_cast<std::size_t>(r.begin)];
}

void stop_time(const Grid& grid, const Prefix& p, double lambda, const DyadicCube& cube,
               std::vector<DyadicCube>& out) {
  if (range_avg(p, cube_cells(grid, cube)) > lambda) {
    out.push_back(cube);
    return;
  }
  if (cube.level == grid.levels) return;
  stop_time(grid, p, lambda, child(cube, 0), out);
  stop_time(grid, p, lambda, child(cube, 1), out);
}

}  // namespace

Decomposition cz_decompose(const SampledFunction& f, const SampledFunction& v, double lambda) {
  check_sampled(f);
  check_weight(v);
  check_same_grid(f, v);
  require(std::isfinite(lambda) && lambda > 0.0, "decomposition level must be positive");
  for (double x : f.values) require(x >= 0.0, "decomposition input must be nonnegative");

  const Grid& grid = f.grid;
  const long long n = grid.cells();
  const Prefix p = build_prefix(f, v);

  Decomposition d;
  d.lambda = lambda;
  stop_time(grid, p, lambda, root_cube(), d.cubes);
  d.root_selected = d.cubes.size() == 1 && d.cubes[0].level == 0;

  d.good = f;
  d.omega.assign(static_cast<std::size_t>(n), 0);
  d.omega_star.assign(static_cast<std::size_t>(n), 0);
  d.weighted_averages.reserve(d.cubes.size());
  d.bad_parts.reserve(d.cubes.size());

  for (const DyadicCube& cube : d.cubes) {
    const CellRange r = cube_cells(grid, cube);
    const double avg = range_avg(p, r);
    d.weighted_averages.push_back(avg);

    BadPart part;
    part.cube = cube;
    part.values.reserve(static_cast<std::size_t>(r.count()));
    for (long long i = r.begin; i < r.end; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      part.values.push_back(f.values[k] - avg);
      d.good.values[k] = avg;
      d.omega[k] = 1;
    }
    d.bad_parts.push_back(std::move(part));

    const CellRange star = dilated_cells(grid, cube, 4.0);
    for (long long i = star.begin; i < star.end; ++i)
      d.omega_star[static_cast<std::size_t>(i)] = 1;

    if (cube.level > 0) {
      const double ratio =
          range_vmass(p, cube_cells(grid, parent(cube))) / range_vmass(p, r);
      d.doubling_constant = std::max(d.doubling_constant, ratio);
    }
  }

  for (std::size_t j = 0; j < d.cubes.size(); ++j) {
    if (d.cubes[j].level == 0) continue;
    if (d.weighted_averages[j] > d.doubling_constant * lambda * (1.0 + 1e-12))
      d.floor_saturated = true;
  }
  return d;
}

SampledFunction bad_sum(const Decomposition& d) {
  SampledFunction out;
  out.grid = d.good.grid;
  out.values.assign(d.good.values.size(), 0.0);
  for (const BadPart& part : d.bad_parts) {
    const CellRange r = cube_cells(out.grid, part.cube);
    for (long long i = r.begin; i < r.end; ++i)
      out.values[static_cast<std::size_t>(i)] = part.values[static_cast<std::size_t>(i - r.begin)];
  }
  return out;
}

DecompositionReport verify_decomposition(const Decomposition& d, const SampledFunction& f,
                                         const SampledFunction& v) {
  check_sampled(f);
  check_weight(v);
  check_same_grid(f, v);
  require(d.good.grid == f.grid, "decomposition was built on a different grid");
  require(d.cubes.size() == d.bad_parts.size() &&
              d.cubes.size() == d.weighted_averages.size(),
          "decomposition pieces are inconsistent");

  const Grid& grid = f.grid;
  const long long n = grid.cells();
  const double lambda = d.lambda;
  const Prefix p = build_prefix(f, v);

  DecompositionReport rep;
  auto add = [&rep](const std::string& name, bool pass, double measured) {
    rep.checks.push_back(PropertyCheck{name, pass, measured});
  };

  // Doubling constant of v dx along the stopped cubes, re-measured.
  double cv = 1.0;
  for (const DyadicCube& cube : d.cubes) {
    if (cube.level == 0) continue;
    cv = std::max(cv, range_vmass(p, cube_cells(grid, parent(cube))) /
                          range_vmass(p, cube_cells(grid, cube)));
  }
  rep.doubling_constant = cv;

  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  int worst_cover = 0;
  for (const DyadicCube& cube : d.cubes) {
    const CellRange r = cube_cells(grid, cube);
    for (long long i = r.begin; i < r.end; ++i)
      worst_cover = std::max(worst_cover, ++cover[static_cast<std::size_t>(i)]);
  }
  add("cubes_disjoint", worst_cover <= 1, static_cast<double>(worst_cover));

  double worst_parent = 0.0;
  bool maximal = true;
  for (const DyadicCube& cube : d.cubes) {
    if (cube.level == 0) continue;
    const double pa = range_avg(p, cube_cells(grid, parent(cube))) / lambda;
    worst_parent = std::max(worst_parent, pa);
    if (!(pa <= 1.0 + 1e-12)) maximal = false;
  }
  add("cubes_maximal", maximal, worst_parent);

  double min_ratio = d.cubes.empty() ? 1.0 : std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d.cubes.size(); ++j)
    min_ratio = std::min(min_ratio, d.weighted_averages[j] / lambda);
  add("average_lower", d.cubes.empty() || min_ratio > 1.0 - 1e-12,
      d.cubes.empty() ? 0.0 : min_ratio);

  double max_upper = 0.0;
  bool upper_ok = true;
  for (std::size_t j = 0; j < d.cubes.size(); ++j) {
    if (d.cubes[j].level == 0) continue;  // vacuous for a stopped root
    const double ratio = d.weighted_averages[j] / (cv * lambda);
    max_upper = std::max(max_upper, ratio);
    if (!(ratio <= 1.0 + 1e-12)) upper_ok = false;
  }
  add("average_upper", upper_ok, max_upper);

  double off_diff = 0.0;
  double small_off = 0.0;
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    if (d.omega[k]) continue;
    off_diff = std::max(off_diff, std::abs(d.good.values[k] - f.values[k]));
    small_off = std::max(small_off, f.values[k] / lambda);
  }
  add("good_matches_f_off_union", off_diff <= 1e-12, off_diff);
  add("small_off_union", small_off <= 1.0 + 1e-12, small_off);

  double on_bound = 0.0;
  bool on_ok = true;
  if (!d.root_selected) {
    for (long long i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      if (!d.omega[k]) continue;
      const double ratio = d.good.values[k] / (cv * lambda);
      on_bound = std::max(on_bound, ratio);
      if (!(ratio <= 1.0 + 1e-12)) on_ok = false;
    }
  }
  add("good_bounded_on_union", on_ok, on_bound);

  double fmax = 0.0;
  for (double x : f.values) fmax = std::max(fmax, std::abs(x));
  double worst_mean = 0.0;
  for (const BadPart& part : d.bad_parts) {
    const CellRange r = cube_cells(grid, part.cube);
    double sum = 0.0;
    for (long long i = r.begin; i < r.end; ++i)
      sum += part.values[static_cast<std::size_t>(i - r.begin)] *
             v.values[static_cast<std::size_t>(i)];
    sum *= grid.h();
    const double scale = fmax * range_vmass(p, r) * grid.h();
    if (scale > 0.0) worst_mean = std::max(worst_mean, std::abs(sum) / scale);
  }
  add("bad_mean_zero", worst_mean <= 1e-10, worst_mean);

  const SampledFunction h = bad_sum(d);
  double recon = 0.0;
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    recon = std::max(recon, std::abs(d.good.values[k] + h.values[k] - f.values[k]));
  }
  add("reconstruction", recon <= 1e-12, recon);

  double v_union = 0.0;
  double total_fv = (p.fv[static_cast<std::size_t>(n)]) * grid.h();
  for (long long i = 0; i < n; ++i)
    if (d.omega[static_cast<std::size_t>(i)]) v_union += v.values[static_cast<std::size_t>(i)];
  v_union *= grid.h();
  const double cheb = total_fv > 0.0 ? v_union * lambda / total_fv : 0.0;
  add("measure_bound", cheb <= 1.0 + 1e-12, cheb);

  bool star_ok = true;
  for (long long i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    if (d.omega[k] && !d.omega_star[k]) star_ok = false;
  }
  for (const DyadicCube& cube : d.cubes) {
    const CellRange star = dilated_cells(grid, cube, 4.0);
    for (long long i = star.begin; i < star.end; ++i)
      if (!d.omega_star[static_cast<std::size_t>(i)]) star_ok = false;
  }
  add("union_star_cover", star_ok, star_ok ? 1.0 : 0.0);

  rep.all_pass = true;
  for (const PropertyCheck& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace mwt
