#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mwt/common.hpp"
#include "mwt/czo.hpp"
#include "mwt/orlicz.hpp"
#include "mwt/weights.hpp"
#include "mwt/young.hpp"

using namespace mwt;

namespace {

const double kPi = 3.14159265358979323846;

SampledFunction random_function(const Grid& g, std::uint64_t seed, double lo, double hi) {
  DetRng rng(seed);
  SampledFunction f;
  f.grid = g;
  f.values.resize(static_cast<std::size_t>(g.cells()));
  for (double& v : f.values) v = rng.uniform(lo, hi);
  return f;
}

// Tent of height 1 over [0.25, 0.75], zero elsewhere; supported well inside
// the domain so transform tails stay representable.
SampledFunction tent(const Grid& g) {
  SampledFunction f = constant_function(g, 0.0);
  for (long long i = 0; i < g.cells(); ++i) {
    const double x = g.midpoint(i);
    if (x > 0.25 && x < 0.75)
      f.values[static_cast<std::size_t>(i)] = 1.0 - 4.0 * std::abs(x - 0.5);
  }
  return f;
}

double dot_h(const SampledFunction& a, const SampledFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.h();
}

double weighted_p_integral(const SampledFunction& f, const SampledFunction& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    s += std::pow(std::abs(f.values[i]), p) * w.values[i];
  return s * f.grid.h();
}

}  // namespace

TEST_CASE("transform of symmetric data is antisymmetric") {
  const Grid g = make_grid(-2.0, 2.0, 10);
  SampledFunction f;
  f.grid = g;
  f.values.resize(static_cast<std::size_t>(g.cells()));
  for (long long i = 0; i < g.cells(); ++i) {
    const double x = g.midpoint(i);
    f.values[static_cast<std::size_t>(i)] = std::exp(-x * x);
  }
  const SampledFunction tf = apply_czo(f, KernelSpec{});
  const std::size_t n = tf.values.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    CHECK(tf.values[i] == doctest::Approx(-tf.values[n - 1 - i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("interval indicator matches the analytic transform") {
  const Grid g = make_grid(-2.0, 2.0, 12);
  const double h = g.h();
  SampledFunction f = constant_function(g, 0.0);
  for (long long i = 0; i < g.cells(); ++i)
    if (std::abs(g.midpoint(i)) < 0.5) f.values[static_cast<std::size_t>(i)] = 1.0;

  const SampledFunction tf = apply_czo(f, KernelSpec{});
  double worst = 0.0;
  for (long long i = 0; i < g.cells(); ++i) {
    const double x = g.midpoint(i);
    if (std::abs(x - 0.5) <= 4.0 * h || std::abs(x + 0.5) <= 4.0 * h) continue;
    const double exact = std::log(std::abs((x + 0.5) / (x - 0.5))) / kPi;
    if (exact == 0.0) continue;
    worst = std::max(worst, std::abs(tf.values[static_cast<std::size_t>(i)] - exact) /
                                std::abs(exact));
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("discrete pairing is skew") {
  const Grid g = make_grid(0.0, 1.0, 10);
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const SampledFunction f = random_function(g, seed, -1.0, 1.0);
    const SampledFunction gg = random_function(g, seed + 40, -1.0, 1.0);
    const SampledFunction tf = apply_czo(f, KernelSpec{});
    const SampledFunction tg = apply_czo(gg, KernelSpec{});
    CHECK(std::abs(dot_h(tf, gg) + dot_h(f, tg)) <= 1e-10);
  }
}

TEST_CASE("kernel condition constants") {
  const Grid g = make_grid(0.0, 1.0, 8);
  const KernelConstants kc = kernel_constants(KernelSpec{}, g);
  CHECK(kc.size_C == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(kc.smooth_C <= 2.0 / kPi * (1.0 + 1e-12));
  CHECK(kc.smooth_C >= 1.9 / kPi);

  // Dropping the sign keeps the size bound but destroys antisymmetry.
  const auto even_kernel = [](double x) { return 1.0 / (kPi * std::abs(x)); };
  const KernelConstants ke = kernel_constants(even_kernel, g);
  CHECK(ke.size_C == doctest::Approx(1.0 / kPi).epsilon(1e-12));

  const Grid gs = make_grid(-2.0, 2.0, 9);
  SampledFunction bump;
  bump.grid = gs;
  bump.values.resize(static_cast<std::size_t>(gs.cells()));
  for (long long i = 0; i < gs.cells(); ++i) {
    const double x = gs.midpoint(i);
    bump.values[static_cast<std::size_t>(i)] = std::exp(-2.0 * x * x);
  }
  const SampledFunction out = apply_tabulated(bump, even_kernel, 1);
  const std::size_t n = out.values.size();
  double asym = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i)
    asym = std::max(asym, std::abs(out.values[i] + out.values[n - 1 - i]));
  CHECK(asym > 1e-3);

  CHECK_THROWS_AS(kernel_value(KernelSpec{}, 0.0), contract_error);
  CHECK(kernel_value(KernelSpec{}, 0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-13));
  CHECK_THROWS_AS(apply_czo(bump, KernelSpec{KernelKind::hilbert, 0}), contract_error);
}

TEST_CASE("commutator recursion and closed forms") {
  const Grid g = make_grid(0.0, 1.0, 9);
  const SampledFunction f = random_function(g, 21, -1.0, 1.0);
  const SampledFunction b = parse_weight(g, "random:22,1.5");
  const KernelSpec kernel{};

  {
    const SampledFunction direct = apply_czo(f, kernel);
    const SampledFunction zeroth = commutator(f, b, 0, kernel);
    for (std::size_t i = 0; i < direct.values.size(); ++i)
      CHECK(zeroth.values[i] == direct.values[i]);
  }

  for (int m : {1, 2}) {
    const SampledFunction c = commutator(f, constant_function(g, 3.7), m, kernel);
    for (double v : c.values) CHECK(std::abs(v) <= 1e-12);
  }

  {
    // Second order against the binomial expansion b^2 Tf - 2b T(bf) + T(b^2 f).
    const SampledFunction second = commutator(f, b, 2, kernel);
    const SampledFunction tf = apply_czo(f, kernel);
    const SampledFunction tbf = apply_czo(product(b, f), kernel);
    const SampledFunction tbbf = apply_czo(product(b, product(b, f)), kernel);
    for (std::size_t i = 0; i < second.values.size(); ++i) {
      const double bb = b.values[i];
      const double expect = bb * bb * tf.values[i] - 2.0 * bb * tbf.values[i] + tbbf.values[i];
      CHECK(second.values[i] == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
    }
  }

  {
    const SampledFunction g2 = random_function(g, 23, -1.0, 1.0);
    SampledFunction combo = f;
    for (std::size_t i = 0; i < combo.values.size(); ++i)
      combo.values[i] = 2.0 * f.values[i] + 3.0 * g2.values[i];
    const SampledFunction left = apply_czo(combo, kernel);
    const SampledFunction tf = apply_czo(f, kernel);
    const SampledFunction tg = apply_czo(g2, kernel);
    for (std::size_t i = 0; i < left.values.size(); ++i)
      CHECK(left.values[i] ==
            doctest::Approx(2.0 * tf.values[i] + 3.0 * tg.values[i]).epsilon(1e-12).scale(1.0));
  }

  {
    // Scaling the symbol scales an order-m bracket by the m-th power.
    SampledFunction b2 = b;
    for (double& v : b2.values) v *= 1.75;
    for (int m : {1, 2}) {
      const SampledFunction base = commutator(f, b, m, kernel);
      const SampledFunction scaled = commutator(f, b2, m, kernel);
      const double factor = std::pow(1.75, m);
      for (std::size_t i = 0; i < base.values.size(); ++i)
        CHECK(scaled.values[i] ==
              doctest::Approx(factor * base.values[i]).epsilon(1e-10).scale(1e-12));
    }
  }
}

TEST_CASE("integrated transform stays under the maximal") {
  const YoungFunction ident = YoungFunction::identity();
  for (double p : {0.5, 1.0, 2.0}) {
    std::vector<double> consts;
    for (int levels : {10, 11}) {
      const Grid g = make_grid(0.0, 1.0, levels);
      const SampledFunction f = tent(g);
      const SampledFunction w = parse_weight(g, "power:0.3,0");
      const SampledFunction tf = apply_czo(f, KernelSpec{});
      const SampledFunction mf = maximal_function(f, constant_function(g, 1.0), ident);
      consts.push_back(weighted_p_integral(tf, w, p) / weighted_p_integral(mf, w, p));
    }
    CHECK(consts[0] <= 8.0);
    CHECK(consts[1] <= 8.0);
    CHECK(std::max(consts[0] / consts[1], consts[1] / consts[0]) <= 1.5);
  }
}

TEST_CASE("integrated brackets stay under the iterated maximal") {
  for (int k : {1, 2}) {
    for (double p : {1.0, 2.0}) {
      std::vector<double> consts;
      for (int levels : {10, 11}) {
        const Grid g = make_grid(0.0, 1.0, levels);
        const SampledFunction f = tent(g);
        const SampledFunction b = parse_weight(g, "logbmo:0.5");
        const SampledFunction w = parse_weight(g, "power:0.3,0");
        const SampledFunction tbk = commutator(f, b, k, KernelSpec{});
        const SampledFunction mk =
            iterated_maximal(f, constant_function(g, 1.0), k + 1);
        consts.push_back(weighted_p_integral(tbk, w, p) / weighted_p_integral(mk, w, p));
      }
      CHECK(consts[0] < 100.0);
      CHECK(consts[1] < 100.0);
      CHECK(std::max(consts[0] / consts[1], consts[1] / consts[0]) <= 1.5);
    }
  }
}

TEST_CASE("power iteration lands on the expected operator scale") {
  const Grid g = make_grid(0.0, 1.0, 8);
  const double sigma = operator_norm_estimate(KernelSpec{}, g, 30, 5);
  CHECK(sigma >= 0.85);
  CHECK(sigma <= 1.0 + 1e-6);
  CHECK(operator_norm_estimate(KernelSpec{}, g, 30, 5) == sigma);  // deterministic
}
