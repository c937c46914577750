#include "mwt/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace mwt {

Grid make_grid(double lo, double hi, int levels) {
  require(std::isfinite(lo) && std::isfinite(hi), "grid endpoints must be finite");
  require(hi > lo, "grid needs hi > lo");
  require(levels >= 1 && levels <= 24, "grid levels must be in [1, 24]");
  return Grid{lo, hi, levels};
}

void check_cube(const Grid& g, DyadicCube q) {
  require(q.level >= 0 && q.level <= g.levels, "cube level out of range for grid");
  require(q.index >= 0 && q.index < (std::int64_t{1} << q.level),
          "cube index out of range for its level");
}

CellRange cube_cells(const Grid& g, DyadicCube q) {
  check_cube(g, q);
  const std::int64_t span = std::int64_t{1} << (g.levels - q.level);
  return CellRange{q.index * span, (q.index + 1) * span};
}

double cube_lo(const Grid& g, DyadicCube q) {
  check_cube(g, q);
  return g.lo + static_cast<double>(q.index) * cube_length(g, q);
}

double cube_hi(const Grid& g, DyadicCube q) {
  check_cube(g, q);
  return g.lo + static_cast<double>(q.index + 1) * cube_length(g, q);
}

double cube_length(const Grid& g, DyadicCube q) {
  return (g.hi - g.lo) / static_cast<double>(std::int64_t{1} << q.level);
}

double cube_center(const Grid& g, DyadicCube q) {
  return g.lo + (static_cast<double>(q.index) + 0.5) * cube_length(g, q);
}

DyadicCube root_cube() { return DyadicCube{0, 0}; }

DyadicCube parent(DyadicCube q) {
  require(q.level >= 1, "root cube has no parent");
  return DyadicCube{q.level - 1, q.index >> 1};
}

DyadicCube ancestor(DyadicCube q, int k) {
  require(k >= 0 && k <= q.level, "ancestor depth exceeds cube level");
  return DyadicCube{q.level - k, q.index >> k};
}

DyadicCube child(DyadicCube q, int side) {
  require(side == 0 || side == 1, "child side must be 0 or 1");
  return DyadicCube{q.level + 1, 2 * q.index + side};
}

DyadicCube cell_cube(const Grid& g, std::int64_t cell) {
  require(cell >= 0 && cell < g.cells(), "cell index out of range");
  return DyadicCube{g.levels, cell};
}

bool cube_contains(DyadicCube outer, DyadicCube inner) {
  if (outer.level > inner.level) return false;
  return (inner.index >> (inner.level - outer.level)) == outer.index;
}

std::string cube_label(DyadicCube q) {
  return "(" + std::to_string(q.level) + "," + std::to_string(q.index) + ")";
}

SampledFunction sample(const Grid& g, const std::function<double(double)>& f) {
  SampledFunction out{g, std::vector<double>(static_cast<std::size_t>(g.cells()))};
  for (std::int64_t k = 0; k < g.cells(); ++k)
    out.values[static_cast<std::size_t>(k)] = f(g.midpoint(k));
  return out;
}

SampledFunction constant_function(const Grid& g, double c) {
  return SampledFunction{g, std::vector<double>(static_cast<std::size_t>(g.cells()), c)};
}

SampledFunction abs_function(const SampledFunction& f) {
  SampledFunction out = f;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

SampledFunction product(const SampledFunction& a, const SampledFunction& b) {
  check_same_grid(a, b);
  SampledFunction out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
  return out;
}

SampledFunction pow_function(const SampledFunction& f, double e) {
  SampledFunction out = f;
  for (double& v : out.values) {
    v = std::pow(v, e);
    if (!std::isfinite(v))
      throw numeric_error("pow_function produced a non-finite sample (exponent " +
                          format_double(e) + ")");
  }
  return out;
}

void check_sampled(const SampledFunction& f, const char* role) {
  require(f.values.size() == static_cast<std::size_t>(f.grid.cells()),
          std::string(role) + ": value count does not match the grid");
  for (double v : f.values)
    require(std::isfinite(v), std::string(role) + ": non-finite sample");
}

void check_weight(const SampledFunction& w, const char* role) {
  check_sampled(w, role);
  for (double v : w.values)
    require(v > 0.0, std::string(role) + ": weight must be positive at every cell");
}

void check_same_grid(const SampledFunction& a, const SampledFunction& b) {
  require(a.grid == b.grid, "operands live on different grids");
}

double integrate(const SampledFunction& f, const SampledFunction& w, DyadicCube q) {
  check_same_grid(f, w);
  const CellRange r = cube_cells(f.grid, q);
  double s = 0.0;
  for (std::int64_t k = r.begin; k < r.end; ++k)
    s += f.values[static_cast<std::size_t>(k)] * w.values[static_cast<std::size_t>(k)];
  return s * f.grid.h();
}

double integrate(const SampledFunction& f, DyadicCube q) {
  const CellRange r = cube_cells(f.grid, q);
  double s = 0.0;
  for (std::int64_t k = r.begin; k < r.end; ++k)
    s += f.values[static_cast<std::size_t>(k)];
  return s * f.grid.h();
}

CellRange dilated_cells(const Grid& g, DyadicCube q, double factor) {
  check_cube(g, q);
  require(std::isfinite(factor) && factor >= 1.0, "dilation factor must be >= 1");
  const double len = cube_length(g, q);
  const double center = cube_center(g, q);
  const double h = g.h();
  const double a = std::max(center - 0.5 * factor * len, g.lo);
  const double b = std::min(center + 0.5 * factor * len, g.hi);
  std::int64_t ia = static_cast<std::int64_t>(std::floor((a - g.lo) / h + 1e-9));
  std::int64_t ib = static_cast<std::int64_t>(std::ceil((b - g.lo) / h - 1e-9));
  ia = std::max<std::int64_t>(ia, 0);
  ib = std::min<std::int64_t>(ib, g.cells());
  return CellRange{ia, ib};
}

CubeStats cube_stats(const SampledFunction& w, DyadicCube q) {
  const CellRange r = cube_cells(w.grid, q);
  double s = 0.0;
  double lo = w.values[static_cast<std::size_t>(r.begin)];
  double hi = lo;
  for (std::int64_t k = r.begin; k < r.end; ++k) {
    const double v = w.values[static_cast<std::size_t>(k)];
    s += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double measure = s * w.grid.h();
  return CubeStats{measure / cube_length(w.grid, q), lo, hi, measure};
}

}  // namespace mwt
