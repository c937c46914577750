#pragma once

#include <cstdint>
#include <functional>

#include "mwt/lattice.hpp"

namespace mwt {

enum class KernelKind { hilbert };

// Truncated convolution kernel on the grid.  eta_cells is the symmetric
// cutoff radius around the singularity, in whole cells (>= 1).
struct KernelSpec {
  KernelKind kind = KernelKind::hilbert;
  int eta_cells = 1;
};

// Pointwise kernel value at offset x != 0.
double kernel_value(const KernelSpec& kernel, double x);

// (Tf)(x_i) = h * sum_{|i-j| >= eta} K((i-j)h) f(x_j).
SampledFunction apply_czo(const SampledFunction& f, const KernelSpec& kernel);

// Same sum for an arbitrary odd-or-not kernel callable (negative controls).
SampledFunction apply_tabulated(const SampledFunction& f,
                                const std::function<double(double)>& kernel,
                                int eta_cells);

struct KernelConstants {
  double size_C = 0.0;    // max over offsets of |x| |K(x)|
  double smooth_C = 0.0;  // max over triples |x-y| > 2|y-z| of |K(x-y)-K(x-z)| |x-y|^2 / |x-z|
};

// Exhaustive scan over grid offsets (O(N^2) pairs).
KernelConstants kernel_constants(const KernelSpec& kernel, const Grid& grid);
KernelConstants kernel_constants(const std::function<double(double)>& kernel, const Grid& grid);

// m = 0: Tf.  m >= 1: b * C_{m-1}(f) - C_{m-1}(b f).
SampledFunction commutator(const SampledFunction& f, const SampledFunction& b, int m,
                           const KernelSpec& kernel);

// Largest singular value of the discrete operator matrix, by power iteration
// on T^*T; a measured figure, not a certificate.
double operator_norm_estimate(const KernelSpec& kernel, const Grid& grid, int iters,
                              std::uint64_t seed);

}  // namespace mwt
