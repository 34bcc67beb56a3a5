#pragma once

#include <optional>
#include <vector>

#include "pcalc/expr.hpp"
#include "pcalc/pfamily.hpp"

namespace pcalc {

enum class Side { both, left, right };

struct DerivEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  Side side = Side::both;
  std::vector<double> h_sequence;
  std::vector<double> quotient_sequence;
  bool converged = false;
  // One-sided limits; both are set for Side::both.
  std::optional<double> left_value;
  std::optional<double> right_value;
};

struct LimitOptions {
  int levels = 30;
  int richardson_order = 2;
  double first_step_min = 1e-2;  // h0 = max(first_step_min, first_step_rel * |t|)
  double first_step_rel = 1e-2;
};

/// D_p f(t) = lim (f(p(t,h)) - f(t)) / h evaluated on h_k = h0 2^-k with a
/// Richardson table. Only p and f are used. One-sided quotients carry all
/// powers of h; the averaged two-sided quotient carries only even powers, so
/// the table eliminates h, h^2 (one-sided) or h^2, h^4 (two-sided).
/// Levels where |f(p) - f(t)| <= 1e3 eps |f(t)| are dropped, together with
/// all later levels. Side::both needs the one-sided limits to agree within
/// 10 tol. DomainError if t is outside the family's domain.
DerivEstimate p_derivative_limit(const PFunction& P, const RealFn& f, double t, Side side, double tol,
                                 const LimitOptions& options = {});
DerivEstimate p_derivative_limit(const PFunction& P, const Expr& f, double t, Side side, double tol,
                                 const LimitOptions& options = {});

/// p_h(t, 0) f'(t) with the symbolic derivative. DomainError when the
/// multiplier vanishes at t; NotDifferentiable for abs.
double p_derivative_formula(const PFunction& P, const Expr& f, double t);

/// The same product as a reusable function of t.
RealFn p_derivative_formula_fn(const PFunction& P, const Expr& f);

struct ComparisonReport {
  double value_1 = 0.0;
  double value_2 = 0.0;
  double abs_diff = 0.0;
  double ratio = 0.0;
  std::optional<double> expected_ratio;  // p_h ratio when both multipliers are defined and nonzero
};

ComparisonReport compare_definitions(const PFunction& P1, const PFunction& P2, const Expr& f, double t,
                                     double tol = 1e-8);

}  // namespace pcalc
