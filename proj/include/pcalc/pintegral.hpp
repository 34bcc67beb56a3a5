#pragma once

#include "pcalc/expr.hpp"
#include "pcalc/pfamily.hpp"
#include "pcalc/quadrature.hpp"

namespace pcalc {

/// I_p(f)(t) = integral from a to t of f(x) / p_h(x, 0) dx, graded at an
/// endpoint where 1/p_h blows up. Absolute error <= tol. Throws
/// NumericalFailure for non-integrable singularities and DomainError when
/// the multiplier vanishes inside the interval.
QuadratureResult p_integral(const PFunction& P, const RealFn& f, double a, double t, double tol);
QuadratureResult p_integral(const PFunction& P, const Expr& f, double a, double t, double tol);

/// |D_p(I_p f)(t) - f(t)|, differentiating x -> I_p(f)(x) with the limit
/// evaluator; the inner integrals run at tol / 100.
double ftc_forward(const PFunction& P, const Expr& f, double a, double t, double tol);

/// |I_p(D_p F)(b) - (F(b) - F(a))| with D_p F from the multiplier formula.
double ftc_backward(const PFunction& P, const Expr& F, double a, double b, double tol);

/// |I_p(f D_p g)(b) - ([f g] from a to b - I_p(D_p f g)(b))|.
double integration_by_parts_check(const PFunction& P, const Expr& f, const Expr& g, double a, double b,
                                  double tol);

}  // namespace pcalc
