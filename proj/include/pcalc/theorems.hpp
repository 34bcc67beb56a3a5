#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcalc/error.hpp"
#include "pcalc/expr.hpp"
#include "pcalc/pderiv.hpp"
#include "pcalc/pfamily.hpp"

namespace pcalc {

/// No root of a mean-value residual; carries the scan for inspection.
class NoRootFound : public NumericalFailure {
 public:
  NoRootFound(const std::string& what, std::vector<double> grid, std::vector<double> residuals)
      : NumericalFailure(what), grid_(std::move(grid)), residuals_(std::move(residuals)) {}
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> grid_;
  std::vector<double> residuals_;
};

struct MvtResult {
  double c = 0.0;
  double k = 0.0;         // p_h(c, 0), or D_p g(c) for the Cauchy form
  double residual = 0.0;  // |residual function| at c
  std::pair<double, double> bracket{0.0, 0.0};
  bool degenerate = false;  // residual below tol on the whole scan grid; c is the midpoint
};

/// Residual-root search shared by the mean value theorems: scan `residual`
/// on 1024 interior points of (a, b), take the leftmost sign change (or
/// exact zero) and bisect to width 1e-12. Without a sign change, the grid
/// point of least |residual| is refined by golden-section search and
/// accepted when |residual| < tol. If |residual| < tol on the whole grid,
/// the midpoint is returned with degenerate = true and bracket (a, b).
/// Throws NumericalFailure when no root is found.
MvtResult find_residual_root(const RealFn& residual, double a, double b, double tol);

/// The 1024-point scan grid used by find_residual_root.
std::vector<double> scan_grid(double a, double b);

/// c in (a, b) with D_p f(c) = (f(b) - f(a)) / (b - a) p_h(c, 0); D_p by the
/// limit definition so non-smooth f are allowed.
MvtResult find_mvt_point(const PFunction& P, const Expr& f, double a, double b, double tol);

/// c with (f(b) - f(a)) D_p g(c) = (g(b) - g(a)) D_p f(c). Throws
/// NumericalFailure if g(b) = g(a) or D_p g vanishes on the scan grid.
MvtResult find_cauchy_mvt_point(const PFunction& P, const Expr& f, const Expr& g, double a, double b,
                                double tol);

/// c with D_p f(c) = 0 for f(a) = f(b) = 0 (InvalidArgument otherwise).
MvtResult find_rolle_point(const PFunction& P, const Expr& f, double a, double b, double tol);

struct MonotonicityReport {
  double t = 0.0;
  bool holds_37 = false;  // p(t, h) < t for the sampled h < 0
  bool holds_38 = false;  // p(t, h) > t for the sampled h > 0
  std::vector<double> sampled_h;
};

MonotonicityReport check_monotonicity_conditions(const PFunction& P, double t,
                                                 std::span<const double> h_samples);

/// Piecewise-linear function through vertices sorted by x; extended by the
/// end segments outside [x_0, x_n].
class Polygon {
 public:
  explicit Polygon(std::vector<std::pair<double, double>> vertices);
  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& vertices() const { return vertices_; }

 private:
  std::vector<std::pair<double, double>> vertices_;
};

/// Limit-definition D_p of a polygonal function at each grid point. P must
/// have p_h(t, 0) = 0 and p(t, 0) = t at the grid points (InvalidArgument
/// otherwise).
std::vector<DerivEstimate> polygonal_derivative_scan(const Polygon& f, const PFunction& P,
                                                     std::span<const double> grid, double tol = 1e-8);

}  // namespace pcalc
