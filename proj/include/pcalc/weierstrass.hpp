#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pcalc/error.hpp"

namespace pcalc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// f(x) = sum_n b^n cos(a^n pi x) with a odd, 0 < b < 1, probed by
/// p(t, h) = t + h^alpha, alpha > 1.
struct WeierstrassParams {
  std::int64_t a = 41;
  double b = 0.9;
  double alpha = 2.0;
};

/// Validated parameters (InvalidArgument unless a is odd and >= 3,
/// 0 < b < 1 and alpha > 1).
WeierstrassParams make_weierstrass(std::int64_t a, double b, double alpha);

/// a^(1/alpha) b > 1 + 3 pi / 2.
bool check_condition(const WeierstrassParams& W);

/// (2/3)^(1/alpha) - pi / (a b - 1) (3/2)^((alpha-1)/alpha).
double lower_bound_coefficient(const WeierstrassParams& W);

/// Parses "p", "p/q" or a terminating decimal such as "-0.125".
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& r);

/// Smallest N with b^N / (1 - b) < tol.
std::size_t truncation_terms(double b, double tol);

/// Partial sum over n < truncation_terms(b, tol) + extra_terms; every
/// a^n x is reduced mod 2 exactly before the cosine.
double weierstrass_eval(const WeierstrassParams& W, const Rational& x, double tol, std::size_t extra_terms = 0);

struct HmStep {
  std::size_t m = 0;
  Integer alpha_m;   // nearest integer to a^m x, ties upward
  Rational t_m;      // a^m x - alpha_m, in (-1/2, 1/2]
  double h_m = 0.0;  // ((1 - t_m) / a^m)^(1/alpha)
  double quotient = 0.0;
  double lower_bound = 0.0;
};

/// Steps m = 1..m_max with alpha_m, t_m, h_m and lower_bound; quotient is
/// left at 0. InvalidArgument if m_max < 1.
std::vector<HmStep> build_hm_sequence(const WeierstrassParams& W, const Rational& x, std::size_t m_max);

/// |f(x + h_m^alpha) - f(x)| / h_m for one step. The terms n >= m use the
/// exact parity of a^(n-m) (alpha_m + 1); the terms n < m use a product of
/// sines so no cancellation occurs. Series truncated at tol b^m.
double hm_quotient(const WeierstrassParams& W, const Rational& x, const HmStep& step, double tol,
                   std::size_t extra_terms = 0);

class BoundViolation : public NumericalFailure {
 public:
  BoundViolation(const std::string& what, std::vector<HmStep> steps)
      : NumericalFailure(what), steps_(std::move(steps)) {}
  const std::vector<HmStep>& steps() const { return steps_; }

 private:
  std::vector<HmStep> steps_;
};

/// build_hm_sequence plus quotients. InvalidArgument when check_condition
/// fails; BoundViolation (with all steps) if some quotient < lower_bound.
std::vector<HmStep> divergence_report(const WeierstrassParams& W, const Rational& x, std::size_t m_max, double tol,
                                      std::size_t extra_terms = 0);

}  // namespace pcalc
