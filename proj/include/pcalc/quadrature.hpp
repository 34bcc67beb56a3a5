#pragma once

#include <cstddef>

#include "pcalc/expr.hpp"

namespace pcalc {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
  bool graded = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b] with QUADPACK-style error
/// scaling. Throws NumericalFailure when `max_subdivisions` intervals do not
/// reach `tol` (absolute), or when the integrand is not finite.
QuadratureResult adaptive_gk15(const RealFn& f, double a, double b, double tol,
                               std::size_t max_subdivisions = 4000);

/// Power-law exponent gamma of |weight(x)| ~ dist^-gamma as x approaches
/// `endpoint` from the side of `inward` (log-log slope of samples at
/// distances 1e-6 and 1e-9 of the span). Returns 0 for bounded weights and
/// +inf when the weight is infinite or undefined next to the endpoint.
double endpoint_singularity_exponent(const RealFn& weight, double endpoint, double inward);

/// Integral of f over [a, b] where `weight` carries the (possible) endpoint
/// blow-up. At an endpoint with exponent gamma in (0, 1) the half-interval is
/// mapped by x = end + width * u^(1/(1-gamma)), which removes a pure power
/// singularity, and then integrated adaptively. Exponents >= 1 are not
/// integrable and throw NumericalFailure.
QuadratureResult integrate_graded(const RealFn& f, const RealFn& weight, double a, double b,
                                  double tol);

}  // namespace pcalc
