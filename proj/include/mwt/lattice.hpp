#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

// Uniform grid on [lo, hi) with N = 2^levels cells of width h, sampled at
// cell midpoints.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  int levels = 1;

  std::int64_t cells() const { return std::int64_t{1} << levels; }
  double h() const { return (hi - lo) / static_cast<double>(cells()); }
  double midpoint(std::int64_t k) const {
    return lo + (static_cast<double>(k) + 0.5) * h();
  }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(double lo, double hi, int levels);

// Dyadic interval: level 0 is the whole domain, index counts from the left.
// The cube (l, j) covers cells [j*2^(L-l), (j+1)*2^(L-l)) on a grid with
// L levels.
struct DyadicCube {
  int level = 0;
  std::int64_t index = 0;
  bool operator==(const DyadicCube&) const = default;
};

struct CellRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;  // half-open
  std::int64_t count() const { return end - begin; }
};

void check_cube(const Grid& g, DyadicCube q);
CellRange cube_cells(const Grid& g, DyadicCube q);
double cube_lo(const Grid& g, DyadicCube q);
double cube_hi(const Grid& g, DyadicCube q);
double cube_length(const Grid& g, DyadicCube q);
double cube_center(const Grid& g, DyadicCube q);
DyadicCube root_cube();
DyadicCube parent(DyadicCube q);
DyadicCube ancestor(DyadicCube q, int k);
DyadicCube child(DyadicCube q, int side);  // side 0 = left, 1 = right
DyadicCube cell_cube(const Grid& g, std::int64_t cell);
bool cube_contains(DyadicCube outer, DyadicCube inner);
std::string cube_label(DyadicCube q);  // "(level,index)"

struct SampledFunction {
  Grid grid;
  std::vector<double> values;  // one midpoint sample per cell
};

SampledFunction sample(const Grid& g, const std::function<double(double)>& f);
SampledFunction constant_function(const Grid& g, double c);
SampledFunction abs_function(const SampledFunction& f);
SampledFunction product(const SampledFunction& a, const SampledFunction& b);
// Cellwise power with validation that the result is finite.
SampledFunction pow_function(const SampledFunction& f, double e);

void check_sampled(const SampledFunction& f, const char* role = "function");  // finite, sized
void check_weight(const SampledFunction& w, const char* role = "weight");     // finite, > 0
void check_same_grid(const SampledFunction& a, const SampledFunction& b);

// Cell range of the cube scaled by factor about its center, clipped to the
// domain and aligned outward to whole cells.
CellRange dilated_cells(const Grid& g, DyadicCube q, double factor);

// h * sum over cells of Q of f_k * w_k (midpoint rule for the weighted
// integral over Q); exact for grid-piecewise-constant integrands.
double integrate(const SampledFunction& f, const SampledFunction& w, DyadicCube q);
double integrate(const SampledFunction& f, DyadicCube q);

struct CubeStats {
  double average = 0.0;
  double infimum = 0.0;
  double supremum = 0.0;
  double w_measure = 0.0;
};

CubeStats cube_stats(const SampledFunction& w, DyadicCube q);

}  // namespace mwt
