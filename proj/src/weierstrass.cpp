#include "pcalc/weierstrass.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "pcalc/kernels.hpp"

namespace pcalc {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

Integer floor_div(const Integer& n, const Integer& d) {
  Integer q = n / d;  // truncates toward zero; d > 0
  if (q * d > n) --q;
  return q;
}

Integer mod(const Integer& n, const Integer& m) {
  Integer r = n % m;
  if (r < 0) r += m;
  return r;
}

// Representative of r / d modulo 2 in (-1, 1], with 0 <= r < 2d.
double centred(const Integer& r, const Integer& d) {
  Integer c = r > d ? Integer(r - 2 * d) : r;
  return Rational(c, d).convert_to<double>();
}

// cos(pi a^k y) for k = 0..count-1 with exact reduction of a^k y mod 2.
std::vector<double> cosines(const Rational& y, std::int64_t a, std::size_t count) {
  const Integer d = denominator(y);
  const Integer two_d = 2 * d;
  Integer r = mod(numerator(y), two_d);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::cos(std::numbers::pi * centred(r, d));
    r = mod(r * a, two_d);
  }
  return out;
}

}  // namespace

WeierstrassParams make_weierstrass(std::int64_t a, double b, double alpha) {
  if (a < 3 || a % 2 == 0) throw InvalidArgument("a must be an odd integer >= 3, got " + std::to_string(a));
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("b must lie in (0, 1)");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be > 1");
  return {a, b, alpha};
}

bool check_condition(const WeierstrassParams& W) {
  return std::pow(static_cast<double>(W.a), 1.0 / W.alpha) * W.b > 1.0 + 1.5 * std::numbers::pi;
}

double lower_bound_coefficient(const WeierstrassParams& W) {
  const double a = static_cast<double>(W.a);
  return std::pow(2.0 / 3.0, 1.0 / W.alpha) -
         std::numbers::pi / (a * W.b - 1.0) * std::pow(1.5, (W.alpha - 1.0) / W.alpha);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return InvalidArgument("not a rational number: '" + std::string(text) + "'"); };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  auto digits = [&](Integer& value, std::size_t& count) {
    count = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      value = value * 10 + (text[i++] - '0');
      ++count;
    }
  };
  Integer num = 0, den = 1;
  std::size_t n_int = 0;
  digits(num, n_int);
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t n_frac = 0;
    digits(num, n_frac);
    if (n_int + n_frac == 0) throw fail();
    for (std::size_t k = 0; k < n_frac; ++k) den *= 10;
  } else if (i < text.size() && text[i] == '/') {
    ++i;
    if (n_int == 0) throw fail();
    den = 0;
    std::size_t n_den = 0;
    digits(den, n_den);
    if (n_den == 0) throw fail();
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  } else if (n_int == 0) {
    throw fail();
  }
  if (i != text.size()) throw fail();
  return Rational(negative ? Integer(-num) : num, den);
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::size_t truncation_terms(double b, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  std::size_t n = 0;
  double bn = 1.0;
  while (bn / (1.0 - b) >= tol) {
    bn *= b;
    ++n;
  }
  return n;
}

double weierstrass_eval(const WeierstrassParams& W, const Rational& x, double tol, std::size_t extra_terms) {
  const std::size_t N = truncation_terms(W.b, tol) + extra_terms;
  const std::vector<double> c = cosines(x, W.a, N);
  double sum = 0.0, bn = 1.0;
  for (std::size_t n = 0; n < N; ++n) {
    sum += bn * c[n];
    bn *= W.b;
  }
  return sum;
}

std::vector<HmStep> build_hm_sequence(const WeierstrassParams& W, const Rational& x, std::size_t m_max) {
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
  const double coef = lower_bound_coefficient(W);
  const double log_a = std::log(static_cast<double>(W.a));
  std::vector<HmStep> steps;
  Integer am = 1;
  for (std::size_t m = 1; m <= m_max; ++m) {
    am *= W.a;
    const Rational y = x * am;
    // ceil(y - 1/2): nearest integer, with t_m = +1/2 at a tie.
    const Rational shifted = y - Rational(1, 2);
    const Integer fl = floor_div(numerator(shifted), denominator(shifted));
    HmStep s;
    s.m = m;
    s.alpha_m = Rational(fl) == shifted ? fl : Integer(fl + 1);
    s.t_m = y - s.alpha_m;
    const Rational gap = 1 - s.t_m;  // h_m^alpha a^m
    if (!(gap > 0 && gap <= Rational(3, 2)))
      throw NumericalFailure("h_m^alpha outside (0, 3/(2 a^m)] at m = " + std::to_string(m));
    const double md = static_cast<double>(m);
    s.h_m = std::pow(gap.convert_to<double>(), 1.0 / W.alpha) * std::exp(-md * log_a / W.alpha);
    s.lower_bound = coef * std::exp(md * log_a / W.alpha) * std::pow(W.b, md);
    steps.push_back(std::move(s));
  }
  return steps;
}

double hm_quotient(const WeierstrassParams& W, const Rational& x, const HmStep& step, double tol,
                   std::size_t extra_terms) {
  const std::size_t m = step.m;
  Integer am = 1;
  for (std::size_t k = 0; k < m; ++k) am *= W.a;
  const Rational shifted = Rational(step.alpha_m + 1, am);  // x + h_m^alpha
  const double gap = (1 - step.t_m).convert_to<double>();

  // n < m: cos B - cos A = -2 sin(pi (A+B)/2) sin(pi (B-A)/2), arguments over pi.
  const Rational mid = (x + shifted) / 2;
  const Integer d = denominator(mid);
  Integer r = mod(numerator(mid), 2 * d);
  double head = 0.0, bn = 1.0;
  for (std::size_t n = 0; n < m; ++n) {
    const double half_diff = 0.5 * gap * std::pow(static_cast<double>(W.a), -static_cast<double>(m - n));
    head += bn * -2.0 * std::sin(std::numbers::pi * centred(r, d)) * std::sin(std::numbers::pi * half_diff);
    r = mod(r * W.a, 2 * d);
    bn *= W.b;
  }

  // n >= m: cos(a^(n-m) pi (alpha_m + 1)) = (-1)^(alpha_m + 1) as a is odd, and
  // cos(a^n pi x) = (-1)^alpha_m cos(a^(n-m) pi t_m).
  const std::size_t K = truncation_terms(W.b, tol) + extra_terms;
  const std::vector<double> c = cosines(step.t_m, W.a, K);
  double tail = 0.0, bk = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    tail += bk * (1.0 + c[k]);
    bk *= W.b;
  }
  const bool odd_next = (step.alpha_m + 1) % 2 != 0;
  tail *= (odd_next ? -1.0 : 1.0) * std::pow(W.b, static_cast<double>(m));

  return std::abs(head + tail) / step.h_m;
}

std::vector<HmStep> divergence_report(const WeierstrassParams& W, const Rational& x, std::size_t m_max, double tol,
                                      std::size_t extra_terms) {
  if (!check_condition(W)) throw InvalidArgument("a^(1/alpha) b <= 1 + 3 pi / 2; the lower bound does not apply");
  std::vector<HmStep> steps = build_hm_sequence(W, x, m_max);
  kernels::for_each_index(steps.size(), [&](std::size_t i) {
    steps[i].quotient = hm_quotient(W, x, steps[i], tol, extra_terms);
  });
  for (const HmStep& s : steps) {
    if (!(s.quotient >= s.lower_bound))
      throw BoundViolation("quotient " + std::to_string(s.quotient) + " below lower bound " +
                               std::to_string(s.lower_bound) + " at m = " + std::to_string(s.m),
                           steps);
  }
  return steps;
}

}  // namespace pcalc
