#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwt/lattice.hpp"

namespace mwt {

// One stopped cube with the values of its mean-zero piece h_j over its cells.
struct BadPart {
  DyadicCube cube{0, 0};
  std::vector<double> values;
};

struct Decomposition {
  double lambda = 0.0;
  std::vector<DyadicCube> cubes;          // stopped cubes, disjoint, DFS order
  std::vector<double> weighted_averages;  // v-weighted f average per cube
  SampledFunction good;                   // f off the union, the average on each cube
  std::vector<BadPart> bad_parts;
  std::vector<std::uint8_t> omega;        // cell mask of the union
  std::vector<std::uint8_t> omega_star;   // union of 4-fold dilates, clipped
  double doubling_constant = 1.0;         // measured max of v(parent)/v(cube)
  bool root_selected = false;             // whole domain stopped at once
  bool floor_saturated = false;           // a stopped cell beat doubling * lambda
};

// Stopping time on v-weighted averages: descend while the average is <= lambda,
// stop at the first cube whose average exceeds it.
Decomposition cz_decompose(const SampledFunction& f, const SampledFunction& v, double lambda);

// Sum of the bad parts as a grid function.
SampledFunction bad_sum(const Decomposition& d);

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
};

struct DecompositionReport {
  bool all_pass = false;
  double doubling_constant = 1.0;
  std::vector<PropertyCheck> checks;
};

// Re-derives every structural property from scratch: disjointness, maximality,
// the two-sided average bounds, the shape of g, mean-zero bad parts, smallness
// off the union, exact reconstruction, and the Chebyshev measure bound.
DecompositionReport verify_decomposition(const Decomposition& d, const SampledFunction& f,
                                         const SampledFunction& v);

}  // namespace mwt
