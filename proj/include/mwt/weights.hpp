#pragma once

#include <string>

#include "mwt/lattice.hpp"

namespace mwt {

struct WeightReport {
  std::string class_name;
  double constant = 1.0;
  DyadicCube witness{0, 0};  // cube attaining the sup
  int levels_scanned = 0;
};

// Muckenhoupt constant over all dyadic cubes.  p = 1 uses avg(w)/inf(w); p > 1
// the two-factor product with the dual exponent.
WeightReport ap_constant(const SampledFunction& w, double p);

// Same with the base measure u dx in both averages.
WeightReport ap_constant(const SampledFunction& w, double p, const SampledFunction& u);

// Reverse Holder constant: (avg of w^s)^{1/s} / avg(w) for finite s > 1,
// sup(w)/avg(w) for s = infinity.
WeightReport rh_constant(const SampledFunction& w, double s);

// Sup over dyadic cubes of the mean oscillation (1/|Q|) \int_Q |b - b_Q|.
WeightReport bmo_norm(const SampledFunction& b);

// Max over 1 <= k <= kmax of |b_Q - b_{A_k}| / (k * bmo), A_k the k-th dyadic
// ancestor of Q.  Returns 0 when b has zero oscillation.
double telescoping_check(const SampledFunction& b, const DyadicCube& Q, int kmax);

// |x - x0|^a sampled at cell midpoints (midpoints dodge the singularity).
SampledFunction power_weight(const Grid& grid, double a, double x0);

// p' = p/(p-1); requires p > 1.
double conjugate_exponent(double p);

// Weight family strings: "const:c", "power:a,x0", "logbmo:x0",
// "random:seed,smoothness".  Everything produced is strictly positive except
// logbmo, which is a symbol (may change sign) — callers wanting a weight
// should not pass logbmo where positivity is checked.
SampledFunction parse_weight(const Grid& grid, const std::string& spec);

}  // namespace mwt
