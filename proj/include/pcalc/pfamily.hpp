#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pcalc/expr.hpp"

namespace pcalc {

enum class FamilyKind { khalil, katugampola, gfd, nderiv, cosine, power, custom };

std::optional<FamilyKind> family_by_name(std::string_view name);
std::string_view family_name(FamilyKind kind);

/// Interval of admissible t with open/closed ends (infinite ends are open).
struct Interval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  bool contains(double t) const {
    return (lo_closed ? t >= lo : t > lo) && (hi_closed ? t <= hi : t < hi);
  }
  bool closure_contains(double t) const { return t >= lo && t <= hi; }
};

/// A p-function p(t, h) together with its exact partial derivative in h.
///
///   khalil       t + h t^(1-alpha)
///   katugampola  t exp(h t^-alpha)
///   gfd          t + Gamma(beta)/Gamma(beta-alpha+1) h t^(1-alpha)
///   nderiv       t + h exp(t^-alpha), or t + h F(t, alpha) when F is given
///   cosine       t + sin(h) cos(t)^(1-alpha)
///   power        t + h^alpha (|h|^alpha for non-integer alpha)
///   custom       F(t, h), with p_h obtained symbolically
class PFunction {
 public:
  FamilyKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::optional<Expr>& F() const { return F_; }
  const Interval& domain() const { return domain_; }

  double p(double t, double h) const { return p_(t, h); }
  double ph(double t, double h) const { return ph_(t, h); }

  /// Gamma(beta)/Gamma(beta-alpha+1) for gfd, 1 otherwise.
  double coefficient() const { return coefficient_; }

 private:
  friend PFunction make_family(FamilyKind, double, std::optional<double>, std::optional<Expr>);

  FamilyKind kind_ = FamilyKind::khalil;
  double alpha_ = 0.5;
  double beta_ = 1.0;
  double coefficient_ = 1.0;
  std::optional<Expr> F_;
  Interval domain_{0.0, 0.0, false, false};
  std::function<double(double, double)> p_;
  std::function<double(double, double)> ph_;
};

/// Build a family after validating its parameters (InvalidArgument on bad
/// alpha/beta or a missing/ill-formed F). For custom, F is p(t, h) itself;
/// for nderiv, F is the optional multiplier F(t, alpha).
PFunction make_family(FamilyKind kind, double alpha, std::optional<double> beta = std::nullopt,
                      std::optional<Expr> F = std::nullopt);

/// The multiplier p_h(t, 0). DomainError outside the open domain (this
/// includes t = 0 for the t^(1-alpha) families).
double ph_zero(const PFunction& P, double t);

/// True when p(t, h) stays inside the domain for the sampled |h| <= delta.
bool range_within_domain(const PFunction& P, double t, double delta, int samples = 16);

struct HRecord {
  double epsilon;
  std::optional<double> h_plus;   // solution of p(t, h) = t + eps
  std::optional<double> h_minus;  // solution of p(t, h) = t - eps
};

struct HReport {
  double t;
  std::vector<HRecord> records;
  bool verdict_plus;
  bool verdict_minus;
};

/// Solve p(t, h) = t +- eps near h = 0 for every eps (positive, strictly
/// decreasing). A side's verdict holds when every eps has a solution and
/// |h| strictly decreases along the list.
HReport check_hypothesis_H(const PFunction& P, double t, std::span<const double> epsilons);

struct L1Report {
  double a;
  double b;
  double estimate;
  std::vector<double> refinements;  // estimates at successively tighter tolerances
  bool converged;
};

/// Estimate of the integral of |1/p_h(x, 0)| over [a, b]. converged is false
/// when the integrand is infinite or non-integrable, or when two successive
/// refinements disagree by more than tol.
L1Report check_l1(const PFunction& P, double a, double b, double tol);

}  // namespace pcalc
