#include "pcalc/pintegral.hpp"

#include <cmath>
#include <string>

#include "pcalc/error.hpp"
#include "pcalc/pderiv.hpp"

namespace pcalc {

QuadratureResult p_integral(const PFunction& P, const RealFn& f, double a, double t, double tol) {
  if (!(a <= t)) throw InvalidArgument("p_integral needs a <= t");
  if (!P.domain().closure_contains(a) || !P.domain().closure_contains(t))
    throw DomainError("integration interval lies outside the family's domain");
  if (a == t) return {};
  for (double s : {0.25, 0.5, 0.75}) {
    const double x = a + s * (t - a);
    if (P.ph(x, 0.0) == 0.0) throw DomainError("p_h(x, 0) vanishes at x = " + std::to_string(x));
  }
  const RealFn integrand = [&](double x) {
    const double m = P.ph(x, 0.0);
    if (m == 0.0) throw DomainError("p_h(x, 0) vanishes at x = " + std::to_string(x));
    return f(x) / m;
  };
  const RealFn weight = [&](double x) { return 1.0 / P.ph(x, 0.0); };
  return integrate_graded(integrand, weight, a, t, tol);
}

QuadratureResult p_integral(const PFunction& P, const Expr& f, double a, double t, double tol) {
  const std::string var = function_variable(f);
  return p_integral(P, as_function(f, var), a, t, tol);
}

double ftc_forward(const PFunction& P, const Expr& f, double a, double t, double tol) {
  const std::string var = function_variable(f);
  const RealFn fn = as_function(f, var);
  const double inner_tol = tol / 100.0;
  const RealFn integral = [&](double x) { return p_integral(P, fn, a, x, inner_tol).value; };
  const DerivEstimate d = p_derivative_limit(P, integral, t, Side::both, tol);
  return std::abs(d.value - fn(t));
}

double ftc_backward(const PFunction& P, const Expr& F, double a, double b, double tol) {
  const std::string var = function_variable(F);
  const RealFn Fn = as_function(F, var);
  const RealFn DpF = p_derivative_formula_fn(P, F);
  const double lhs = p_integral(P, DpF, a, b, tol).value;
  return std::abs(lhs - (Fn(b) - Fn(a)));
}

double integration_by_parts_check(const PFunction& P, const Expr& f, const Expr& g, double a, double b,
                                  double tol) {
  const RealFn fn = as_function(f, function_variable(f));
  const RealFn gn = as_function(g, function_variable(g));
  const RealFn Dpf = p_derivative_formula_fn(P, f);
  const RealFn Dpg = p_derivative_formula_fn(P, g);
  const RealFn left = [&](double x) { return fn(x) * Dpg(x); };
  const RealFn right = [&](double x) { return Dpf(x) * gn(x); };
  const double lhs = p_integral(P, left, a, b, tol).value;
  const double boundary = fn(b) * gn(b) - fn(a) * gn(a);
  const double rhs = boundary - p_integral(P, right, a, b, tol).value;
  return std::abs(lhs - rhs);
}

}  // namespace pcalc
