#include "pcalc/pfamily.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pcalc/error.hpp"
#include "pcalc/quadrature.hpp"

namespace pcalc {

namespace {

constexpr std::array<std::pair<std::string_view, FamilyKind>, 7> kFamilies{{
    {"khalil", FamilyKind::khalil},
    {"katugampola", FamilyKind::katugampola},
    {"gfd", FamilyKind::gfd},
    {"nderiv", FamilyKind::nderiv},
    {"cosine", FamilyKind::cosine},
    {"power", FamilyKind::power},
    {"custom", FamilyKind::custom},
}};

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

void require_only(const Expr& F, std::initializer_list<std::string_view> allowed, std::string_view what) {
  for (const auto& name : variables(F)) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == name;
    if (!ok) throw InvalidArgument(std::string(what) + " may not reference '" + name + "'");
  }
}

}  // namespace

std::optional<FamilyKind> family_by_name(std::string_view name) {
  for (const auto& [n, k] : kFamilies)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view family_name(FamilyKind kind) {
  for (const auto& [n, k] : kFamilies)
    if (k == kind) return n;
  return "?";
}

PFunction make_family(FamilyKind kind, double alpha, std::optional<double> beta, std::optional<Expr> F) {
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
  PFunction P;
  P.kind_ = kind;
  P.alpha_ = alpha;
  P.beta_ = beta.value_or(1.0);
  const Interval positive{0.0, kInf, false, false};
  const Interval everywhere{-kInf, kInf, false, false};

  auto require_unit_alpha = [&] {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw InvalidArgument(std::string(family_name(kind)) + " needs 0 < alpha <= 1, got " +
                            std::to_string(alpha));
  };

  switch (kind) {
    case FamilyKind::khalil: {
      if (!(alpha > 0.0)) throw InvalidArgument("khalil needs alpha > 0, got " + std::to_string(alpha));
      const double e = 1.0 - alpha;
      P.domain_ = positive;
      P.p_ = [e](double t, double h) { return t + h * std::pow(t, e); };
      P.ph_ = [e](double t, double) { return std::pow(t, e); };
      break;
    }
    case FamilyKind::katugampola: {
      require_unit_alpha();
      P.domain_ = positive;
      P.p_ = [alpha](double t, double h) { return t * std::exp(h * std::pow(t, -alpha)); };
      P.ph_ = [alpha](double t, double h) {
        const double s = std::pow(t, -alpha);
        return t * s * std::exp(h * s);
      };
      break;
    }
    case FamilyKind::gfd: {
      require_unit_alpha();
      if (!beta) throw InvalidArgument("gfd needs beta");
      const double b = P.beta_;
      if (!std::isfinite(b) || b == 0.0 || is_nonpositive_integer(b))
        throw InvalidArgument("gfd needs beta != 0 and beta not a negative integer, got " +
                              std::to_string(b));
      if (is_nonpositive_integer(b - alpha + 1.0))
        throw InvalidArgument("gfd: Gamma(beta - alpha + 1) has a pole");
      const double c = std::tgamma(b) / std::tgamma(b - alpha + 1.0);
      if (!std::isfinite(c) || c == 0.0) throw InvalidArgument("gfd coefficient is not finite");
      P.coefficient_ = c;
      const double e = 1.0 - alpha;
      P.domain_ = positive;
      P.p_ = [c, e](double t, double h) { return t + c * h * std::pow(t, e); };
      P.ph_ = [c, e](double t, double) { return c * std::pow(t, e); };
      break;
    }
    case FamilyKind::nderiv: {
      require_unit_alpha();
      P.domain_ = positive;
      if (F) {
        require_only(*F, {"t", "alpha", "beta"}, "nderiv F(t, alpha)");
        const auto Ft = as_function(*F, "t", Env{{"alpha", alpha}, {"beta", P.beta_}});
        P.F_ = F;
        P.p_ = [Ft](double t, double h) { return t + h * Ft(t); };
        P.ph_ = [Ft](double t, double) { return Ft(t); };
      } else {
        P.p_ = [alpha](double t, double h) { return t + h * std::exp(std::pow(t, -alpha)); };
        P.ph_ = [alpha](double t, double) { return std::exp(std::pow(t, -alpha)); };
      }
      break;
    }
    case FamilyKind::cosine: {
      require_unit_alpha();
      const double e = 1.0 - alpha;
      P.domain_ = Interval{0.0, std::numbers::pi / 2.0, true, false};
      P.p_ = [e](double t, double h) { return t + std::sin(h) * std::pow(std::cos(t), e); };
      P.ph_ = [e](double t, double h) { return std::cos(h) * std::pow(std::cos(t), e); };
      break;
    }
    case FamilyKind::power: {
      if (!(alpha > 1.0)) throw InvalidArgument("power needs alpha > 1, got " + std::to_string(alpha));
      P.domain_ = everywhere;
      if (alpha == std::floor(alpha)) {
        P.p_ = [alpha](double t, double h) { return t + std::pow(h, alpha); };
        P.ph_ = [alpha](double, double h) { return alpha * std::pow(h, alpha - 1.0); };
      } else {
        P.p_ = [alpha](double t, double h) { return t + std::pow(std::abs(h), alpha); };
        P.ph_ = [alpha](double, double h) {
          return std::copysign(alpha * std::pow(std::abs(h), alpha - 1.0), h);
        };
      }
      break;
    }
    case FamilyKind::custom: {
      if (!F) throw InvalidArgument("custom family needs F(t, h)");
      require_only(*F, {"t", "h", "alpha", "beta"}, "custom p(t, h)");
      const Env params{{"alpha", alpha}, {"beta", P.beta_}};
      const Expr dFdh = differentiate(*F, "h");
      P.F_ = F;
      P.domain_ = everywhere;
      P.p_ = as_function2(*F, "t", "h", params);
      P.ph_ = as_function2(dFdh, "t", "h", params);
      break;
    }
  }
  return P;
}

double ph_zero(const PFunction& P, double t) {
  if (!P.domain().contains(t))
    throw DomainError("t = " + std::to_string(t) + " is outside the domain of the " +
                      std::string(family_name(P.kind())) + " family");
  return P.ph(t, 0.0);
}

bool range_within_domain(const PFunction& P, double t, double delta, int samples) {
  for (int i = 1; i <= samples; ++i) {
    const double h = delta * i / samples;
    for (double s : {h, -h}) {
      double v = 0.0;
      try {
        v = P.p(t, s);
      } catch (const Error&) {
        return false;
      }
      if (!std::isfinite(v) || !P.domain().closure_contains(v)) return false;
    }
  }
  return true;
}

namespace {

// Root of p(t, h) - target with a bracket grown by doubling from 0 on each
// side in turn (positive side first), capped at 64 doublings.
std::optional<double> solve_near_zero(const PFunction& P, double t, double target, double eps) {
  auto g = [&](double h) -> double {
    try {
      return P.p(t, h) - target;
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const double g0 = g(0.0);
  if (!std::isfinite(g0)) return std::nullopt;
  if (g0 == 0.0) return 0.0;
  double delta = eps * 1e-6;
  for (int doubling = 0; doubling <= 64; ++doubling, delta *= 2.0) {
    for (double side : {1.0, -1.0}) {
      const double end = side * delta;
      const double ge = g(end);
      if (!std::isfinite(ge)) continue;
      if (ge == 0.0) return end;
      if ((ge > 0.0) == (g0 > 0.0)) continue;
      double lo = 0.0, hi = end, glo = g0;
      for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double gm = g(mid);
        if (!std::isfinite(gm)) break;
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return std::nullopt;
}

bool side_verdict(const std::vector<HRecord>& recs, std::optional<double> HRecord::*side) {
  double previous = kInf;
  for (const auto& r : recs) {
    const auto& h = r.*side;
    if (!h) return false;
    if (!(std::abs(*h) < previous)) return false;
    previous = std::abs(*h);
  }
  return true;
}

}  // namespace

HReport check_hypothesis_H(const PFunction& P, double t, std::span<const double> epsilons) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw InvalidArgument("epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw InvalidArgument("epsilons must be strictly decreasing");
  }
  HReport report{t, {}, false, false};
  for (double eps : epsilons)
    report.records.push_back({eps, solve_near_zero(P, t, t + eps, eps), solve_near_zero(P, t, t - eps, eps)});
  report.verdict_plus = side_verdict(report.records, &HRecord::h_plus);
  report.verdict_minus = side_verdict(report.records, &HRecord::h_minus);
  return report;
}

L1Report check_l1(const PFunction& P, double a, double b, double tol) {
  if (!(a < b)) throw InvalidArgument("check_l1 needs a < b");
  if (!P.domain().closure_contains(a) || !P.domain().closure_contains(b))
    throw DomainError("check_l1 interval lies outside the family's domain");
  const RealFn inv = [&P](double x) { return std::abs(1.0 / P.ph(x, 0.0)); };
  L1Report report{a, b, kInf, {}, false};
  // Successive refinements at tol, tol/16, tol/256; converged once two agree.
  double requested = tol;
  for (int level = 0; level < 3; ++level, requested /= 16.0) {
    try {
      const QuadratureResult r = integrate_graded(inv, inv, a, b, requested);
      report.refinements.push_back(r.value);
      report.estimate = r.value;
    } catch (const NumericalFailure&) {
      report.converged = false;
      return report;
    }
    const auto n = report.refinements.size();
    if (n >= 2 && std::abs(report.refinements[n - 1] - report.refinements[n - 2]) <= tol) {
      report.converged = true;
      return report;
    }
  }
  return report;
}

}  // namespace pcalc
