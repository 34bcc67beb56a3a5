#include "pcalc/riccati.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pcalc/error.hpp"
#include "pcalc/kernels.hpp"
#include "pcalc/pintegral.hpp"

namespace pcalc {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussNodes{
    -0.960289856497536231683560868569473, -0.796666477413626739591553936475830,
    -0.525532409916328985817739049189246, -0.183434642495649804939476142360184,
    0.183434642495649804939476142360184,  0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,  0.960289856497536231683560868569473};
constexpr std::array<double, 8> kGaussWeights{
    0.101228536290376259152531354309962, 0.222381034453374470544355994426241,
    0.313706645877887287337962201986601, 0.362683783378361982965150449277195,
    0.362683783378361982965150449277195, 0.313706645877887287337962201986601,
    0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

constexpr double kEps = std::numeric_limits<double>::epsilon();

double clock_increment(const PFunction& P, double x0, double x1, double qtol) {
  static const RealFn one = [](double) { return 1.0; };
  return p_integral(P, one, x0, x1, qtol).value;
}

// x in [x_lo, x_hi] with tau(x) = target, given tau at both ends; tau is
// monotone there. Safeguarded Newton with d tau / dx = 1 / p_h(x, 0).
double invert_clock(const PFunction& P, double x_lo, double tau_lo, double x_hi, double tau_hi, double target,
                    double qtol) {
  const bool increasing = tau_hi > tau_lo;
  double lo = x_lo, hi = x_hi;
  double x = x_lo + (x_hi - x_lo) * (target - tau_lo) / (tau_hi - tau_lo);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  const double scale = std::max(std::abs(tau_hi), std::abs(tau_lo));
  for (int it = 0; it < 100; ++it) {
    const double phi = tau_lo + clock_increment(P, x_lo, x, qtol) - target;
    if (std::abs(phi) <= 4.0 * kEps * scale) return x;
    if ((phi > 0.0) == increasing)
      hi = x;
    else
      lo = x;
    double next = x - phi * P.ph(x, 0.0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * kEps * std::abs(x)) return next;
    x = next;
  }
  return x;
}

struct Stencil {
  std::size_t first;
  std::array<double, 4> value;
  std::array<double, 4> slope;
};

// Cubic Lagrange through nodes first..first+3 evaluated at s.
Stencil cubic_stencil(std::span<const double> nodes, std::size_t first, double s) {
  Stencil st{first, {}, {}};
  for (std::size_t i = 0; i < 4; ++i) {
    const double xi = nodes[first + i];
    double v = 1.0;
    for (std::size_t l = 0; l < 4; ++l)
      if (l != i) v *= (s - nodes[first + l]) / (xi - nodes[first + l]);
    st.value[i] = v;
    double d = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      if (m == i) continue;
      double term = 1.0 / (xi - nodes[first + m]);
      for (std::size_t l = 0; l < 4; ++l)
        if (l != i && l != m) term *= (s - nodes[first + l]) / (xi - nodes[first + l]);
      d += term;
    }
    st.slope[i] = d;
  }
  return st;
}

std::size_t stencil_start(std::size_t interval, std::size_t n) {
  // interval j spans nodes j..j+1; use j-1..j+2, clamped into 0..n.
  const std::size_t s = interval == 0 ? 0 : interval - 1;
  return std::min(s, n - 3);
}

double quad_tol(double tau_total) { return 1e-13 * std::max(1.0, std::abs(tau_total)); }

std::size_t locate(const std::vector<double>& grid, double t) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t j = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(j, grid.size() - 2);
}

struct Interpolated {
  double value;
  double slope;  // du / dtau
};

Interpolated interpolate(const PFunction& P, const RiccatiSolution& sol, double t) {
  const std::size_t n = sol.u.size() - 1;
  const std::size_t j = locate(sol.grid, t);
  const double tau = sol.tau[j] + clock_increment(P, sol.grid[j], t, quad_tol(sol.tau.back()));
  const Stencil st = cubic_stencil(sol.tau, stencil_start(j, n), tau);
  Interpolated out{0.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    out.value += st.value[i] * sol.u[st.first + i];
    out.slope += st.slope[i] * sol.u[st.first + i];
  }
  return out;
}

}  // namespace

ContractionCertificate contraction_precheck(const PFunction& P, const Expr& q, double T, double u0) {
  if (!(T > 0.0)) throw InvalidArgument("the horizon T must be positive");
  ContractionCertificate cert;
  const L1Report l1 = check_l1(P, 0.0, T, 1e-10);
  if (!l1.converged) throw NumericalFailure("||1/p_h||_L1[0,T] diverges");
  cert.l1_norm = l1.estimate;

  const RealFn qf = as_function(q, function_variable(q));
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) cert.q_inf = std::max(cert.q_inf, std::abs(qf(T * i / kSamples)));

  const double b_max = 10.0 * (std::abs(u0) + std::sqrt(cert.q_inf + 1.0));
  const double b_min = u0 != 0.0 ? std::abs(u0) : 1e-6 * b_max;
  constexpr int kRadii = 200;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kRadii; ++i) {
    const double b = b_min * std::pow(b_max / b_min, static_cast<double>(i) / (kRadii - 1));
    const double margin = std::min(b / (cert.q_inf + b * b), 1.0 / (2.0 * b)) - cert.l1_norm;
    if (margin > best_margin) {
      best_margin = margin;
      cert.b = b;
    }
  }
  cert.feasible = best_margin > 0.0;
  cert.k = 2.0 * cert.b * cert.l1_norm;
  return cert;
}

ClockGrid riccati_grid(const PFunction& P, double T, std::size_t n) {
  if (n < 16) throw InvalidArgument("grid_n must be at least 16");
  constexpr int kSignSamples = 257;
  double sign = 0.0;
  for (int i = 1; i < kSignSamples; ++i) {
    const double m = P.ph(T * i / kSignSamples, 0.0);
    if (m == 0.0 || (sign != 0.0 && (m > 0.0) != (sign > 0.0)))
      throw NumericalFailure("p_h(., 0) vanishes or changes sign on (0, T)");
    sign = m > 0.0 ? 1.0 : -1.0;
  }
  const double tau_total = clock_increment(P, 0.0, T, 1e-13);
  const double qtol = quad_tol(tau_total);
  ClockGrid g;
  g.t.resize(n + 1);
  g.tau.resize(n + 1);
  g.t[0] = 0.0;
  g.tau[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double target = tau_total * static_cast<double>(j) / static_cast<double>(n);
    g.t[j] = invert_clock(P, g.t[j - 1], g.tau[j - 1], T, tau_total, target, qtol);
    g.tau[j] = target;
  }
  g.t[n] = T;
  g.tau[n] = tau_total;
  return g;
}

RiccatiSolution solve_riccati(const RiccatiProblem& pr) {
  const PFunction& P = pr.P;
  RiccatiSolution sol;
  sol.certificate = contraction_precheck(P, pr.q, pr.T, pr.u0);
  sol.certified = sol.certificate.feasible;
  if (!sol.certified && !pr.override_certificate)
    throw NumericalFailure("contraction certificate infeasible (best k = " + std::to_string(sol.certificate.k) +
                           "); rerun with the override to iterate anyway");

  const std::size_t n = pr.grid_n;
  ClockGrid grid = riccati_grid(P, pr.T, n);
  const double qtol = quad_tol(grid.tau.back());
  const RealFn qf = as_function(pr.q, function_variable(pr.q));

  // Quadrature points per panel, fixed across sweeps.
  constexpr std::size_t kPoints = kGaussNodes.size();
  std::vector<double> weight(n * kPoints), source(n * kPoints), stencil_weight(4 * n * kPoints);
  std::vector<int> stencil_index(4 * n * kPoints);
  kernels::for_each_index(n, [&](std::size_t p) {
    const double t0 = grid.t[p], t1 = grid.t[p + 1];
    const double s0 = grid.tau[p], s1 = grid.tau[p + 1];
    const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
    const std::size_t first = stencil_start(p, n);
    for (std::size_t g = 0; g < kPoints; ++g) {
      const std::size_t i = p * kPoints + g;
      const double s = mid + half * kGaussNodes[g];
      const double x = invert_clock(P, t0, s0, t1, s1, s, qtol);
      weight[i] = half * kGaussWeights[g];
      source[i] = qf(x);
      const Stencil st = cubic_stencil(grid.tau, first, s);
      for (std::size_t k = 0; k < 4; ++k) {
        stencil_index[4 * i + k] = static_cast<int>(first + k);
        stencil_weight[4 * i + k] = st.value[k];
      }
    }
  });

  std::vector<double> u(n + 1, pr.initial_value.value_or(pr.u0));
  std::vector<double> next(n + 1), panels(n);
  int growth = 0;
  for (int it = 1; it <= pr.max_iterations; ++it) {
    kernels::panel_sums(weight, source, stencil_index, stencil_weight, u, kPoints, panels);
    next[0] = pr.u0;
    double acc = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      acc += panels[p];
      next[p + 1] = pr.u0 + acc;
    }
    double delta = 0.0, sup = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      delta = std::max(delta, std::abs(next[j] - u[j]));
      sup = std::max(sup, std::abs(next[j]));
    }
    if (!std::isfinite(delta)) throw NumericalFailure("Picard iteration produced non-finite values");
    if (!sol.update_norms.empty() && delta > sol.update_norms.back()) {
      if (++growth >= 5) throw NumericalFailure("Picard iteration diverged (update grew 5 sweeps in a row)");
    } else {
      growth = 0;
    }
    sol.update_norms.push_back(delta);
    sol.iterate_sup.push_back(sup);
    u.swap(next);
    sol.iterations = static_cast<std::size_t>(it);
    sol.final_delta = delta;
    if (delta < pr.tol) {
      sol.converged = true;
      break;
    }
  }

  sol.grid = std::move(grid.t);
  sol.tau = std::move(grid.tau);
  sol.u = std::move(u);

  // Multiplier formula on the interpolant: D_p u = p_h u'(t) = du/dtau.
  for (std::size_t j = 1; j < n; ++j) {
    const Stencil st = cubic_stencil(sol.tau, stencil_start(j, n), sol.tau[j]);
    double du = 0.0;
    for (std::size_t k = 0; k < 4; ++k) du += st.slope[k] * sol.u[st.first + k];
    sol.residual = std::max(sol.residual, std::abs(du + sol.u[j] * sol.u[j] - qf(sol.grid[j])));
  }
  return sol;
}

double riccati_value(const PFunction& P, const RiccatiSolution& sol, double t) {
  if (sol.u.size() < 4) throw InvalidArgument("solution has too few nodes");
  return interpolate(P, sol, t).value;
}

double riccati_residual(const PFunction& P, const RiccatiSolution& sol, const Expr& q) {
  if (sol.u.size() < 4 || sol.u.size() != sol.grid.size() || sol.tau.size() != sol.grid.size())
    throw InvalidArgument("malformed solution");
  const RealFn qf = as_function(q, function_variable(q));
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < sol.grid.size(); ++j) {
    const double t = 0.5 * (sol.grid[j] + sol.grid[j + 1]);
    const Interpolated v = interpolate(P, sol, t);
    worst = std::max(worst, std::abs(v.slope + v.value * v.value - qf(t)));
  }
  return worst;
}

}  // namespace pcalc
