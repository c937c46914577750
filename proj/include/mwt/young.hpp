#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mwt/common.hpp"

namespace mwt {

enum class YoungKind {
  identity,        // t
  power,           // t^p, p >= 1
  log_bump,        // t^r * (1 + log+ t)^eps, r >= 1, eps >= 0
  exp_minus_one,   // (e^(t^(1/delta)) - 1) for t > 1, 0 otherwise; delta >= 1
  truncated_zero,  // 0 on [0,1), inner(t) - inner(1) on [1,inf)
  theta_compose,   // integral_1^t d/du[trunc0(psi)](u) * phi(t/u) du for t > 1
  tabulated,       // piecewise-linear through monotone knots, last slope extended
};

// Immutable evaluable Young function. Copies share the underlying node.
class YoungFunction {
 public:
  static YoungFunction identity();
  static YoungFunction power(double p);
  static YoungFunction log_bump(double r, double eps);
  static YoungFunction exp_minus_one(double delta);
  static YoungFunction truncated_zero(const YoungFunction& inner);
  static YoungFunction theta_compose(const YoungFunction& phi, const YoungFunction& psi);
  // Knots (t_i, y_i): t strictly increasing starting at (0,0), y nondecreasing.
  static YoungFunction tabulated(std::vector<std::pair<double, double>> knots);

  YoungKind kind() const;
  double param_a() const;  // p, r, or delta
  double param_b() const;  // eps
  YoungFunction first() const;   // inner spec (trunc0, theta)
  YoungFunction second() const;  // theta only: trunc0 of the psi argument

  double operator()(double t) const;  // t >= 0 required
  std::string spec_string() const;    // round-trips through parse_young

  struct Node;  // implementation detail, defined in the source file

 private:
  explicit YoungFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Grammar: identity | power:p | logbump:r,eps | expm1:delta
//        | trunc0(<spec>) | theta(<spec>,<spec>)
YoungFunction parse_young(const std::string& spec);

// Right-continuous generalized inverse sup{t : phi(t) <= y}, located by
// bracketed bisection. Where phi is continuous and strictly increasing this
// matches the exact inverse to 1e-12 * max(1, y) in value.
double young_inverse(const YoungFunction& phi, double y);

// Closed-form derivative for identity/power/log_bump/exp_minus_one and their
// trunc0 wrappers; contract error for other kinds.
double young_derivative(const YoungFunction& phi, double t);

// sup_{s >= 0} (t*s - F(s)) over a log-spaced grid with local refinement;
// +infinity when the objective is unbounded along the grid.
double legendre_sup(const std::function<double(double)>& F, double t);

// legendre_sup applied to the spec's eval; relative accuracy about 1e-6.
double complementary(const YoungFunction& phi, double t);

struct DominationVerdict {
  bool dominated = false;
  // When dominated: psi(t) <= b * phi(a*t) held for all sampled t >= t0.
  double a = 0.0, b = 0.0, t0 = 0.0;
  // When not dominated: a sampled t violating the widest triple searched.
  double witness_t = 0.0;
};

// Searches a in {2^i}, b in {2^i}, i in [-10,10], t0 in {1,2,...,2^10} over a
// geometric t-sample reaching about 1e16; returns the first passing triple in
// the order t0 ascending, a ascending, b ascending.
DominationVerdict check_domination(const YoungFunction& psi, const YoungFunction& phi);

struct BpVerdict {
  bool in_bp = false;
  double integral = 0.0;    // log-grid estimate of the truncated B_p integral
  double tail_slope = 0.0;  // fitted d log(phi) / d log(t) near t = 1e12
};

// Classifies by the known asymptotic order of the kind where available
// (power, log_bump, identity, exp_minus_one, trunc0 of those); theta_compose
// and tabulated fall back to the tail-slope fit. The integral estimate covers
// [1, 1e12].
BpVerdict check_bp(const YoungFunction& phi, double p);

// C = max{(eps/delta)^eps, 1}; verifies log_bump(r,eps)(t) <= C * t^(r+delta)
// on a geometric sample of [1, 1e8] and throws numeric_error on violation.
double small_bound_constant(double r, double eps, double delta);

}  // namespace mwt
