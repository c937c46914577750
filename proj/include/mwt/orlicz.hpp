#pragma once

#include "mwt/lattice.hpp"
#include "mwt/young.hpp"

namespace mwt {

// Luxemburg average of f on Q against weight w: the least lambda > 0 with
// (1/w(Q)) \int_Q Phi(|f|/lambda) w <= 1.  Returns 0 when f vanishes on Q.
double luxemburg_norm(const SampledFunction& f, const SampledFunction& w,
                      const DyadicCube& Q, const YoungFunction& phi);

// inf_mu { mu + (mu/w(Q)) \int_Q Phi(|f|/mu) w }, located by golden-section
// search in log mu.  Always lands within [1,2] times luxemburg_norm.
double luxemburg_infimum_form(const SampledFunction& f, const SampledFunction& w,
                              const DyadicCube& Q, const YoungFunction& phi);

// ||fg||_Theta / (||f||_Phi * ||g||_Psi) on Q (0/0 gives 0).  The triple must
// satisfy inv(Phi)(t)*inv(Psi)(t) <= C*inv(Theta)(t) on a sample of
// t in [1, 1e6] with C capped at 32; otherwise a contract error with the
// witness t is raised.
double holder_ratio(const SampledFunction& f, const SampledFunction& g,
                    const SampledFunction& w, const DyadicCube& Q,
                    const YoungFunction& phi, const YoungFunction& psi,
                    const YoungFunction& theta);

// Pointwise sup of Luxemburg averages over every dyadic cube containing the
// cell, levels 0..L (cell-level cubes included).
SampledFunction maximal_function(const SampledFunction& f, const SampledFunction& w,
                                 const YoungFunction& phi);

// Same supremum restricted to dyadic subcubes of root; cells outside root
// are set to 0.
SampledFunction maximal_function_local(const SampledFunction& f, const SampledFunction& w,
                                       const YoungFunction& phi, const DyadicCube& root);

// k-fold composition of the plain weighted maximal (phi = identity).
SampledFunction iterated_maximal(const SampledFunction& f, const SampledFunction& w, int k);

struct LocalizationResult {
  double ratio = 1.0;
  bool degenerate = false;  // f vanished outside the dilate; ratio forced to 1
};

// Oscillation max/min over the cells of Q of the maximal function applied to
// f restricted outside the 4-fold dilate of Q (dilate clipped to the domain
// and aligned outward to cell boundaries).
LocalizationResult localization_ratio(const SampledFunction& f, const SampledFunction& w,
                                      const YoungFunction& phi, const DyadicCube& Q);

}  // namespace mwt
