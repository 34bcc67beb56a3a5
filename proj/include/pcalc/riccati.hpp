#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pcalc/expr.hpp"
#include "pcalc/pfamily.hpp"

namespace pcalc {

// Generalized Riccati initial value problem
//
//   D_p u(t) + u(t)^2 = q(t),  u(0) = u0,  0 <= t <= T,
//
// solved by successive approximations u <- u0 + I_p(q - u^2).
//
// Grid and interpolation live in the clock tau(t) = I_p(1)(t). Along tau the
// equation reads du/dtau + u^2 = q, so u is as smooth in tau as q is, even
// where it behaves like t^alpha in t. Nodes are equidistant in tau.

struct RiccatiProblem {
  PFunction P;
  Expr q;
  double u0 = 0.0;
  double T = 1.0;
  std::size_t grid_n = 64;
  double tol = 1e-10;
  /// Run without a feasible certificate (the contraction factor is then
  /// only observed).
  bool override_certificate = false;
  /// Constant starting iterate; defaults to u0.
  std::optional<double> initial_value;
  int max_iterations = 200;
};

struct ContractionCertificate {
  bool feasible = false;
  double b = 0.0;  // ball radius, >= |u0|
  double k = 0.0;  // 2 b l1_norm
  double l1_norm = 0.0;
  double q_inf = 0.0;
};

struct RiccatiSolution {
  std::vector<double> grid;  // t nodes, grid[0] = 0, grid.back() = T
  std::vector<double> tau;   // clock at the nodes, equidistant
  std::vector<double> u;
  std::size_t iterations = 0;
  double final_delta = 0.0;
  double residual = 0.0;  // sup over interior nodes of |D_p u + u^2 - q|
  ContractionCertificate certificate;
  bool certified = false;
  bool converged = false;
  std::vector<double> update_norms;  // sup |u_{n+1} - u_n| per sweep
  std::vector<double> iterate_sup;   // sup |u_n| per sweep
};

/// ||1/p_h||_L1[0,T], ||q||_inf and the best ball radius b >= |u0| on a
/// 200-point log grid up to 10 (|u0| + sqrt(||q||_inf + 1)). Feasible iff
/// some b has l1 < min{b / (||q||_inf + b^2), 1 / (2b)}. Throws
/// NumericalFailure when the L1 norm diverges.
ContractionCertificate contraction_precheck(const PFunction& P, const Expr& q, double T, double u0);

/// Nodes t_j with tau(t_j) = j tau(T) / n. Throws NumericalFailure if p_h(., 0)
/// changes sign on (0, T).
struct ClockGrid {
  std::vector<double> t;
  std::vector<double> tau;
};
ClockGrid riccati_grid(const PFunction& P, double T, std::size_t n);

/// Picard iteration to sup-norm update < tol (at most max_iterations
/// sweeps). Throws NumericalFailure for an infeasible certificate without
/// override, or when the update norm grows five sweeps in a row.
RiccatiSolution solve_riccati(const RiccatiProblem& problem);

/// Cubic interpolant of the solution (in tau) at an arbitrary t in [0, T].
double riccati_value(const PFunction& P, const RiccatiSolution& sol, double t);

/// sup |D_p u + u^2 - q| at the midpoints between nodes, from the cubic
/// interpolant; independent of the nodes used by the solver.
double riccati_residual(const PFunction& P, const RiccatiSolution& sol, const Expr& q);

}  // namespace pcalc
