#include "mwt/czo.hpp"

#include <cmath>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_kernel(const KernelSpec& kernel) {
  require(kernel.kind == KernelKind::hilbert, "unknown kernel kind");
  require(kernel.eta_cells >= 1, "kernel truncation must cover at least one cell");
}

SampledFunction kernel_sum(const SampledFunction& f,
                           const std::function<double(double)>& kernel, int eta_cells) {
  check_sampled(f);
  require(eta_cells >= 1, "kernel truncation must cover at least one cell");
  const Grid& grid = f.grid;
  const long long n = grid.cells();
  const double h = grid.h();

  // Row weights depend only on the offset: cache h*K(d*h) once.
  std::vector<double> row(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (long long d = -(n - 1); d <= n - 1; ++d) {
    if (std::llabs(d) < eta_cells) continue;
    row[static_cast<std::size_t>(d + n - 1)] = h * kernel(static_cast<double>(d) * h);
  }

  SampledFunction out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, [&](long long i) {
    double acc = 0.0;
    const double* r = row.data() + (i + n - 1);
    for (long long j = 0; j < n; ++j) acc += r[-j] * f.values[static_cast<std::size_t>(j)];
    out.values[static_cast<std::size_t>(i)] = acc;
  });
  return out;
}

}  // namespace

double kernel_value(const KernelSpec& kernel, double x) {
  check_kernel(kernel);
  require(x != 0.0, "kernel is singular at zero offset");
  return 1.0 / (kPi * x);
}

SampledFunction apply_czo(const SampledFunction& f, const KernelSpec& kernel) {
  check_kernel(kernel);
  return kernel_sum(f, [&](double x) { return 1.0 / (kPi * x); }, kernel.eta_cells);
}

SampledFunction apply_tabulated(const SampledFunction& f,
                                const std::function<double(double)>& kernel,
                                int eta_cells) {
  return kernel_sum(f, kernel, eta_cells);
}

KernelConstants kernel_constants(const std::function<double(double)>& kernel,
                                 const Grid& grid) {
  const long long n = grid.cells();
  const double h = grid.h();

  KernelConstants out;
  for (long long d = 1; d <= n - 1; ++d) {
    const double x = static_cast<double>(d) * h;
    out.size_C = std::max(out.size_C, std::abs(x * kernel(x)));
    out.size_C = std::max(out.size_C, std::abs(x * kernel(-x)));
  }

  // Triples x,y,z on the lattice: d1 = x-y, d2 = y-z, |d1| > 2|d2|.
  for (long long d1 = -(n - 1); d1 <= n - 1; ++d1) {
    if (d1 == 0) continue;
    const long long cap = (std::llabs(d1) - 1) / 2;
    for (long long d2 = -cap; d2 <= cap; ++d2) {
      if (d2 == 0) continue;
      const long long dxz = d1 + d2;
      if (dxz == 0 || std::llabs(dxz) > n - 1) continue;
      const double xy = static_cast<double>(d1) * h;
      const double xz = static_cast<double>(dxz) * h;
      const double value = std::abs(kernel(xy) - kernel(xz)) * xy * xy / std::abs(xz);
      out.smooth_C = std::max(out.smooth_C, value);
    }
  }
  return out;
}

KernelConstants kernel_constants(const KernelSpec& kernel, const Grid& grid) {
  check_kernel(kernel);
  return kernel_constants([&](double x) { return 1.0 / (kPi * x); }, grid);
}

SampledFunction commutator(const SampledFunction& f, const SampledFunction& b, int m,
                           const KernelSpec& kernel) {
  check_sampled(f);
  check_sampled(b);
  check_same_grid(f, b);
  require(m >= 0, "commutator order must be >= 0");
  if (m == 0) return apply_czo(f, kernel);
  const SampledFunction inner = commutator(f, b, m - 1, kernel);
  const SampledFunction cross = commutator(product(b, f), b, m - 1, kernel);
  SampledFunction out;
  out.grid = f.grid;
  out.values.resize(f.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = b.values[i] * inner.values[i] - cross.values[i];
  return out;
}

double operator_norm_estimate(const KernelSpec& kernel, const Grid& grid, int iters,
                              std::uint64_t seed) {
  check_kernel(kernel);
  require(iters >= 1, "power iteration needs at least one step");
  const long long n = grid.cells();

  DetRng rng(seed);
  SampledFunction x;
  x.grid = grid;
  x.values.resize(static_cast<std::size_t>(n));
  for (auto& v : x.values) v = rng.uniform(-1.0, 1.0);

  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    const SampledFunction tx = apply_czo(x, kernel);
    // T is skew-adjoint on the grid, so T^* = -T; the sign washes out of the
    // Rayleigh quotient for T^*T.
    const SampledFunction ttx = apply_czo(tx, kernel);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      num += tx.values[i] * tx.values[i];
      den += x.values[i] * x.values[i];
    }
    sigma = std::sqrt(num / den);
    double norm = 0.0;
    for (double v : ttx.values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    x.values.clear();
    x.values.reserve(ttx.values.size());
    for (double v : ttx.values) x.values.push_back(-v / norm);
  }
  return sigma;
}

}  // namespace mwt
