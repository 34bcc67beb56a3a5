#include "pcalc/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pcalc/kernels.hpp"

namespace pcalc {

namespace {

constexpr std::size_t kScanPoints = 1024;
constexpr double kRootWidth = 1e-12;

bool opposite(double x, double y) { return (x < 0.0 && y > 0.0) || (x > 0.0 && y < 0.0); }

// D_p f by the multiplier formula where it is valid (built-in family, smooth
// f, nonzero multiplier), else by the limit definition.
RealFn derivative_fn(const PFunction& P, const Expr& f, double tol) {
  const RealFn fn = as_function(f, function_variable(f));
  const RealFn limit = [P, fn, tol](double c) {
    const DerivEstimate d = p_derivative_limit(P, fn, c, Side::both, tol);
    return d.converged ? d.value : std::numeric_limits<double>::quiet_NaN();
  };
  if (P.kind() == FamilyKind::custom) return limit;
  RealFn formula;
  try {
    formula = p_derivative_formula_fn(P, f);
  } catch (const NotDifferentiable&) {
    return limit;
  }
  return [P, formula, limit](double c) { return ph_zero(P, c) != 0.0 ? formula(c) : limit(c); };
}

}  // namespace

std::vector<double> scan_grid(double a, double b) {
  std::vector<double> grid(kScanPoints);
  for (std::size_t i = 0; i < kScanPoints; ++i)
    grid[i] = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(kScanPoints + 1);
  return grid;
}

MvtResult find_residual_root(const RealFn& residual, double a, double b, double tol) {
  if (!(a < b)) throw InvalidArgument("need a < b");
  const std::vector<double> grid = scan_grid(a, b);
  const std::vector<double> r = kernels::map_grid(residual, grid);

  MvtResult out;
  double max_abs = 0.0;
  for (double v : r) max_abs = std::isfinite(v) ? std::max(max_abs, std::abs(v)) : HUGE_VAL;
  if (max_abs < tol) {
    out.c = 0.5 * (a + b);
    out.residual = std::abs(residual(out.c));
    out.bracket = {a, b};
    out.degenerate = true;
    return out;
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (r[i] == 0.0) {
      out.c = grid[i];
      out.residual = 0.0;
      out.bracket = {grid[i], grid[i]};
      return out;
    }
    if (i + 1 < grid.size() && opposite(r[i], r[i + 1])) {
      double lo = grid[i], hi = grid[i + 1], rlo = r[i];
      while (hi - lo > kRootWidth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double rm = residual(mid);
        if (rm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (opposite(rlo, rm)) {
          hi = mid;
        } else {
          lo = mid;
          rlo = rm;
        }
      }
      out.c = 0.5 * (lo + hi);
      out.residual = std::abs(residual(out.c));
      out.bracket = {lo, hi};
      return out;
    }
  }

  // No sign change: the residual may touch zero without crossing it.
  const auto best = static_cast<std::size_t>(
      std::min_element(r.begin(), r.end(), [](double x, double y) { return !std::isnan(x) && (std::isnan(y) || std::abs(x) < std::abs(y)); }) -
      r.begin());
  double lo = best == 0 ? a : grid[best - 1];
  double hi = best + 1 == grid.size() ? b : grid[best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = std::abs(residual(x1));
  double f2 = std::abs(residual(x2));
  while (hi - lo > kRootWidth) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = std::abs(residual(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = std::abs(residual(x2));
    }
  }
  out.c = 0.5 * (lo + hi);
  out.residual = std::abs(residual(out.c));
  out.bracket = {lo, hi};
  if (!(out.residual < tol))
    throw NoRootFound("no sign change and no near-zero residual on (" + std::to_string(a) + ", " +
                          std::to_string(b) + "); " +
                          (std::isnan(out.residual) ? std::string("the derivative limit did not converge")
                                                    : "least |residual| " + std::to_string(out.residual)),
                      grid, r);
  return out;
}

MvtResult find_mvt_point(const PFunction& P, const Expr& f, double a, double b, double tol) {
  const RealFn fn = as_function(f, function_variable(f));
  const double slope = (fn(b) - fn(a)) / (b - a);
  const RealFn Df = derivative_fn(P, f, tol);
  const RealFn residual = [&](double c) { return Df(c) - slope * ph_zero(P, c); };
  MvtResult out = find_residual_root(residual, a, b, tol);
  out.k = ph_zero(P, out.c);
  return out;
}

MvtResult find_cauchy_mvt_point(const PFunction& P, const Expr& f, const Expr& g, double a, double b,
                                double tol) {
  const RealFn fn = as_function(f, function_variable(f));
  const RealFn gn = as_function(g, function_variable(g));
  const double df = fn(b) - fn(a);
  const double dg = gn(b) - gn(a);
  if (dg == 0.0) throw NumericalFailure("g(b) = g(a); the Cauchy quotient is undefined");
  const RealFn Dg = derivative_fn(P, g, tol);
  const RealFn Df = derivative_fn(P, f, tol);

  const std::vector<double> grid = scan_grid(a, b);
  const std::vector<double> dg_grid = kernels::map_grid(Dg, grid);
  double scale = 1.0;
  for (double v : dg_grid) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(dg_grid[i]) <= 1e-14 * scale)
      throw NumericalFailure("D_p g vanishes at t = " + std::to_string(grid[i]));

  const RealFn residual = [&](double c) { return df * Dg(c) - dg * Df(c); };
  MvtResult out = find_residual_root(residual, a, b, tol);
  out.k = Dg(out.c);
  return out;
}

MvtResult find_rolle_point(const PFunction& P, const Expr& f, double a, double b, double tol) {
  const RealFn fn = as_function(f, function_variable(f));
  if (!(std::abs(fn(a)) < tol) || !(std::abs(fn(b)) < tol))
    throw InvalidArgument("Rolle's theorem needs f(a) = f(b) = 0");
  const RealFn residual = derivative_fn(P, f, tol);
  MvtResult out = find_residual_root(residual, a, b, tol);
  out.k = ph_zero(P, out.c);
  return out;
}

MonotonicityReport check_monotonicity_conditions(const PFunction& P, double t,
                                                 std::span<const double> h_samples) {
  if (!P.domain().contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the domain");
  MonotonicityReport rep;
  rep.t = t;
  rep.sampled_h.assign(h_samples.begin(), h_samples.end());
  rep.holds_37 = true;
  rep.holds_38 = true;
  for (double h : h_samples) {
    const double d = P.p(t, h) - t;
    if (h < 0.0 && !(d < 0.0)) rep.holds_37 = false;
    if (h > 0.0 && !(d > 0.0)) rep.holds_38 = false;
  }
  return rep;
}

Polygon::Polygon(std::vector<std::pair<double, double>> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw InvalidArgument("a polygonal function needs at least two vertices");
  std::sort(vertices_.begin(), vertices_.end());
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    if (!(vertices_[i].first > vertices_[i - 1].first))
      throw InvalidArgument("polygon vertices need distinct x");
}

double Polygon::operator()(double x) const {
  const auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                                   [](double v, const std::pair<double, double>& p) { return v < p.first; });
  std::size_t hi = static_cast<std::size_t>(it - vertices_.begin());
  hi = std::clamp<std::size_t>(hi, 1, vertices_.size() - 1);
  const auto& [x0, y0] = vertices_[hi - 1];
  const auto& [x1, y1] = vertices_[hi];
  if (x == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

std::vector<DerivEstimate> polygonal_derivative_scan(const Polygon& f, const PFunction& P,
                                                     std::span<const double> grid, double tol) {
  for (double x : grid) {
    bool ok = false;
    try {
      ok = ph_zero(P, x) == 0.0 && P.p(x, 0.0) == x;
    } catch (const DomainError&) {
    }
    if (!ok) throw InvalidArgument("polygonal scan needs p_h(t, 0) = 0 and p(t, 0) = t on the whole grid");
  }
  const RealFn fn = [&f](double x) { return f(x); };
  std::vector<DerivEstimate> out(grid.size());
  kernels::for_each_index(grid.size(),
                          [&](std::size_t i) { out[i] = p_derivative_limit(P, fn, grid[i], Side::both, tol); });
  return out;
}

}  // namespace pcalc
