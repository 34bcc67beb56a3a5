#include "pcalc/pderiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcalc/error.hpp"

namespace pcalc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extrapolated {
  double value = 0.0;
  double error = kInf;
};

// Richardson table over a sequence sampled at h0 2^-k. `power_step` is 1 when
// the sequence expands in h, h^2, ... and 2 when it expands in h^2, h^4, ...
// The reported level minimises the larger of the last two successive
// differences and the level's rounding-noise estimate, so quotients that
// repeat exactly once h is tiny cannot be mistaken for convergence.
Extrapolated richardson(const std::vector<double>& seq, const std::vector<double>& noise, int order,
                        int power_step) {
  const std::size_t n = seq.size();
  if (n == 0) return {0.0, 0.0};
  if (n == 1) return {seq[0], kInf};
  std::vector<std::vector<double>> table(n);
  std::vector<double> best(n);
  for (std::size_t k = 0; k < n; ++k) {
    table[k].push_back(seq[k]);
    const std::size_t cols = std::min<std::size_t>(k, static_cast<std::size_t>(order));
    for (std::size_t j = 1; j <= cols; ++j) {
      const double factor = std::ldexp(1.0, static_cast<int>(j) * power_step) - 1.0;
      table[k].push_back(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / factor);
    }
    best[k] = table[k].back();
  }
  if (n == 2) return {best[1], std::abs(best[1] - best[0])};
  Extrapolated out;
  const std::size_t first = std::min<std::size_t>(static_cast<std::size_t>(order) + 1, n - 1);
  for (std::size_t k = std::max<std::size_t>(first, 2); k < n; ++k) {
    const double score =
        std::max({std::abs(best[k] - best[k - 1]), std::abs(best[k - 1] - best[k - 2]), noise[k]});
    if (score < out.error) out = {best[k], score};
  }
  return out;
}

bool within(double err, double tol, double value) { return err <= tol * std::max(1.0, std::abs(value)); }

}  // namespace

DerivEstimate p_derivative_limit(const PFunction& P, const RealFn& f, double t, Side side, double tol,
                                 const LimitOptions& options) {
  if (!P.domain().contains(t))
    throw DomainError("t = " + std::to_string(t) + " is outside the domain of the " +
                      std::string(family_name(P.kind())) + " family");
  const double ft = f(t);
  const double guard = 1e3 * kEps * std::abs(ft);
  const double h0 = std::max(options.first_step_min, options.first_step_rel * std::abs(t));
  const bool want_right = side != Side::left;
  const bool want_left = side != Side::right;

  std::vector<double> hs, q_right, q_left, n_right, n_left;
  // Rounding error of one quotient: f(t), f(p) and the argument p itself.
  const auto noise = [&](double df, double h, double pv) {
    const double dp = pv - t;
    const double slope = dp != 0.0 ? std::abs(df / dp) : 0.0;
    return 4.0 * kEps * (std::abs(ft) + std::abs(pv) * slope) / h;
  };
  std::optional<DomainError> first_failure;
  for (int k = 0; k < options.levels; ++k) {
    const double h = std::ldexp(h0, -k);
    double dr = 0.0, dl = 0.0, pr = t, pl = t;
    try {
      if (want_right) dr = f(pr = P.p(t, h)) - ft;
      if (want_left) dl = f(pl = P.p(t, -h)) - ft;
    } catch (const DomainError& e) {
      // Steps that leave f's domain are skipped until the sequence starts.
      if (!hs.empty()) break;
      if (!first_failure) first_failure = e;
      continue;
    }
    if ((want_right && std::abs(dr) <= guard) || (want_left && std::abs(dl) <= guard)) break;
    hs.push_back(h);
    if (want_right) {
      q_right.push_back(dr / h);
      n_right.push_back(noise(dr, h, pr));
    }
    if (want_left) {
      q_left.push_back(-dl / h);
      n_left.push_back(noise(dl, h, pl));
    }
  }
  if (hs.empty() && first_failure) throw *first_failure;

  DerivEstimate est;
  est.side = side;
  est.h_sequence = hs;
  const int order = options.richardson_order;
  if (hs.empty()) {
    // f is constant at the working precision around t.
    est.value = 0.0;
    est.error_estimate = 0.0;
    est.converged = true;
    if (want_right) est.right_value = 0.0;
    if (want_left) est.left_value = 0.0;
    return est;
  }

  switch (side) {
    case Side::right: {
      const auto r = richardson(q_right, n_right, order, 1);
      est.value = r.value;
      est.error_estimate = r.error;
      est.quotient_sequence = q_right;
      est.right_value = r.value;
      est.converged = within(r.error, tol, r.value);
      break;
    }
    case Side::left: {
      const auto l = richardson(q_left, n_left, order, 1);
      est.value = l.value;
      est.error_estimate = l.error;
      est.quotient_sequence = q_left;
      est.left_value = l.value;
      est.converged = within(l.error, tol, l.value);
      break;
    }
    case Side::both: {
      std::vector<double> averaged(hs.size()), n_avg(hs.size());
      for (std::size_t i = 0; i < hs.size(); ++i) {
        averaged[i] = 0.5 * (q_right[i] + q_left[i]);
        n_avg[i] = 0.5 * (n_right[i] + n_left[i]);
      }
      const auto r = richardson(q_right, n_right, order, 1);
      const auto l = richardson(q_left, n_left, order, 1);
      const auto m = richardson(averaged, n_avg, order, 2);
      est.value = m.value;
      est.error_estimate = m.error;
      est.quotient_sequence = averaged;
      est.right_value = r.value;
      est.left_value = l.value;
      est.converged = within(m.error, tol, m.value) && within(std::abs(r.value - l.value), 10.0 * tol, m.value);
      break;
    }
  }
  return est;
}

DerivEstimate p_derivative_limit(const PFunction& P, const Expr& f, double t, Side side, double tol,
                                 const LimitOptions& options) {
  return p_derivative_limit(P, as_function(f, function_variable(f)), t, side, tol, options);
}

RealFn p_derivative_formula_fn(const PFunction& P, const Expr& f) {
  const std::string var = function_variable(f);
  const RealFn df = as_function(differentiate(f, var), var);
  return [P, df](double t) {
    const double m = ph_zero(P, t);
    if (m == 0.0)
      throw DomainError("p_h(t, 0) = 0 at t = " + std::to_string(t) +
                        "; the multiplier formula does not apply, use the limit definition");
    return m * df(t);
  };
}

double p_derivative_formula(const PFunction& P, const Expr& f, double t) {
  return p_derivative_formula_fn(P, f)(t);
}

ComparisonReport compare_definitions(const PFunction& P1, const PFunction& P2, const Expr& f, double t,
                                     double tol) {
  ComparisonReport r;
  r.value_1 = p_derivative_limit(P1, f, t, Side::both, tol).value;
  r.value_2 = p_derivative_limit(P2, f, t, Side::both, tol).value;
  r.abs_diff = std::abs(r.value_1 - r.value_2);
  r.ratio = r.value_2 != 0.0 ? r.value_1 / r.value_2 : std::numeric_limits<double>::quiet_NaN();
  try {
    const double m1 = ph_zero(P1, t);
    const double m2 = ph_zero(P2, t);
    if (m2 != 0.0 && std::isfinite(m1) && std::isfinite(m2)) r.expected_ratio = m1 / m2;
  } catch (const Error&) {
  }
  return r;
}

}  // namespace pcalc
