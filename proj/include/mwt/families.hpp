#pragma once

#include <string>

#include "mwt/lattice.hpp"

namespace mwt {

// Function family strings for experiment configs and the CLI:
//   indicator:a,b    characteristic function of [a, b)
//   tent:c,r         max(0, 1 - |x - c| / r)
//   bump:c,s         exp(-((x - c) / s)^2)
//   spike:x0         indicator of the single cell containing x0
//   pwc:seed,pieces  random piecewise constant on `pieces` equal intervals
// plus every weight family (const, power, logbmo, random) as a fallback.
SampledFunction parse_function(const Grid& grid, const std::string& spec);

}  // namespace mwt
