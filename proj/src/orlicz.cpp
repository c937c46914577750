#include "mwt/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

namespace {

// (1/w(Q)) \int_Q Phi(|f|/lambda) w; the cell width cancels.
double ball_value(const SampledFunction& f, const SampledFunction& w,
                  const CellRange& r, const YoungFunction& phi, double lambda,
                  const DyadicCube& Q) {
  double num = 0.0;
  double den = 0.0;
  for (long long i = r.begin; i < r.end; ++i) {
    const double t = std::abs(f.values[static_cast<std::size_t>(i)]) / lambda;
    if (!std::isfinite(t))
      throw numeric_error("luxemburg integrand overflow on " + cube_label(Q));
    num += phi(t) * w.values[static_cast<std::size_t>(i)];
    den += w.values[static_cast<std::size_t>(i)];
  }
  return num / den;
}

void check_query(const SampledFunction& f, const SampledFunction& w) {
  check_sampled(f);
  check_weight(w);
  check_same_grid(f, w);
}

}  // namespace

double luxemburg_norm(const SampledFunction& f, const SampledFunction& w,
                      const DyadicCube& Q, const YoungFunction& phi) {
  check_query(f, w);
  check_cube(f.grid, Q);
  const CellRange r = cube_cells(f.grid, Q);

  double wf = 0.0;
  double wtot = 0.0;
  for (long long i = r.begin; i < r.end; ++i) {
    wf += std::abs(f.values[static_cast<std::size_t>(i)]) * w.values[static_cast<std::size_t>(i)];
    wtot += w.values[static_cast<std::size_t>(i)];
  }
  if (wf == 0.0) return 0.0;

  const auto ball = [&](double lam) { return ball_value(f, w, r, phi, lam, Q); };

  // Bracket the flip of the unit-ball test around the weighted average of |f|
  // (which is the exact answer for the identity).
  const double seed = wf / wtot;
  double lo = seed;
  double hi = seed;
  int spent = 0;
  if (ball(seed) <= 1.0) {
    for (;;) {
      if (++spent > 200)
        throw numeric_error("luxemburg bracket search stalled on " + cube_label(Q));
      const double next = lo * 0.25;
      if (!(ball(next) <= 1.0)) {
        hi = lo;
        lo = next;
        break;
      }
      lo = next;
    }
  } else {
    for (;;) {
      if (++spent > 200)
        throw numeric_error("luxemburg bracket search stalled on " + cube_label(Q));
      const double next = hi * 4.0;
      if (ball(next) <= 1.0) {
        lo = hi;
        hi = next;
        break;
      }
      hi = next;
    }
  }

  int iters = 0;
  while (hi - lo > 1e-10 * hi && ++iters <= 200) {
    const double mid = 0.5 * (lo + hi);
    if (ball(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // feasible end: the unit-ball test holds there
}

double luxemburg_infimum_form(const SampledFunction& f, const SampledFunction& w,
                              const DyadicCube& Q, const YoungFunction& phi) {
  const double norm = luxemburg_norm(f, w, Q, phi);
  if (norm == 0.0) return 0.0;
  const CellRange r = cube_cells(f.grid, Q);

  const auto objective = [&](double y) {
    const double mu = std::exp(y);
    return mu * (1.0 + ball_value(f, w, r, phi, mu, Q));
  };

  // mu * Phi(c/mu) is a perspective of a convex function, so the objective is
  // convex in mu and golden section is safe.
  double a = std::log(norm) - std::log(32.0);
  double b = std::log(norm) + std::log(32.0);
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int i = 0; i < 120 && b - a > 1e-12; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(d);
    }
  }
  return std::min(fc, fd);
}

double holder_ratio(const SampledFunction& f, const SampledFunction& g,
                    const SampledFunction& w, const DyadicCube& Q,
                    const YoungFunction& phi, const YoungFunction& psi,
                    const YoungFunction& theta) {
  check_query(f, w);
  check_sampled(g);
  check_same_grid(f, g);

  for (int k = 0; k <= 60; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    const double prod = young_inverse(phi, t) * young_inverse(psi, t);
    const double target = young_inverse(theta, t);
    if (!(prod <= 32.0 * target))
      throw contract_error("inverse triple bound fails at t = " + format_double(t) +
                           ": " + format_double(prod) + " vs " + format_double(target));
  }

  const double nfg = luxemburg_norm(product(f, g), w, Q, theta);
  if (nfg == 0.0) return 0.0;
  const double nf = luxemburg_norm(f, w, Q, phi);
  const double ng = luxemburg_norm(g, w, Q, psi);
  return nfg / (nf * ng);
}

SampledFunction maximal_function_local(const SampledFunction& f, const SampledFunction& w,
                                       const YoungFunction& phi, const DyadicCube& root) {
  check_query(f, w);
  check_cube(f.grid, root);
  const Grid& grid = f.grid;
  const long long n = grid.cells();

  SampledFunction out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(n), 0.0);

  const bool plain = phi.kind() == YoungKind::identity;
  std::vector<double> pf, pw;
  if (plain) {
    pf.assign(static_cast<std::size_t>(n) + 1, 0.0);
    pw.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (long long i = 0; i < n; ++i) {
      pf[static_cast<std::size_t>(i) + 1] =
          pf[static_cast<std::size_t>(i)] +
          std::abs(f.values[static_cast<std::size_t>(i)]) * w.values[static_cast<std::size_t>(i)];
      pw[static_cast<std::size_t>(i) + 1] =
          pw[static_cast<std::size_t>(i)] + w.values[static_cast<std::size_t>(i)];
    }
  }

  for (int lev = root.level; lev <= grid.levels; ++lev) {
    const long long first = root.index << (lev - root.level);
    const long long count = 1LL << (lev - root.level);
    std::vector<double> norms(static_cast<std::size_t>(count), 0.0);
    parallel_for(count, [&](long long j) {
      const DyadicCube cube{lev, first + j};
      if (plain) {
        const CellRange r = cube_cells(grid, cube);
        const double num = pf[static_cast<std::size_t>(r.end)] - pf[static_cast<std::size_t>(r.begin)];
        const double den = pw[static_cast<std::size_t>(r.end)] - pw[static_cast<std::size_t>(r.begin)];
        norms[static_cast<std::size_t>(j)] = num / den;
      } else {
        norms[static_cast<std::size_t>(j)] = luxemburg_norm(f, w, cube, phi);
      }
    });
    for (long long j = 0; j < count; ++j) {
      const CellRange r = cube_cells(grid, DyadicCube{lev, first + j});
      const double v = norms[static_cast<std::size_t>(j)];
      for (long long i = r.begin; i < r.end; ++i) {
        double& slot = out.values[static_cast<std::size_t>(i)];
        if (v > slot) slot = v;
      }
    }
  }
  return out;
}

SampledFunction maximal_function(const SampledFunction& f, const SampledFunction& w,
                                 const YoungFunction& phi) {
  return maximal_function_local(f, w, phi, root_cube());
}

SampledFunction iterated_maximal(const SampledFunction& f, const SampledFunction& w, int k) {
  require(k >= 1, "iterated maximal needs k >= 1");
  const YoungFunction ident = YoungFunction::identity();
  SampledFunction cur = maximal_function(f, w, ident);
  for (int i = 1; i < k; ++i) cur = maximal_function(cur, w, ident);
  return cur;
}

LocalizationResult localization_ratio(const SampledFunction& f, const SampledFunction& w,
                                      const YoungFunction& phi, const DyadicCube& Q) {
  check_query(f, w);
  check_cube(f.grid, Q);
  const Grid& grid = f.grid;
  const CellRange blot = dilated_cells(grid, Q, 4.0);

  SampledFunction outside = f;
  for (long long i = blot.begin; i < blot.end; ++i)
    outside.values[static_cast<std::size_t>(i)] = 0.0;

  bool any = false;
  for (double v : outside.values)
    if (v != 0.0) {
      any = true;
      break;
    }
  if (!any) return {1.0, true};

  const SampledFunction m = maximal_function(outside, w, phi);
  const CellRange r = cube_cells(grid, Q);
  double mx = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (long long i = r.begin; i < r.end; ++i) {
    const double v = m.values[static_cast<std::size_t>(i)];
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  return {mx / mn, false};
}

}  // namespace mwt
