// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pcalc/corpus.hpp"
#include "pcalc/error.hpp"
#include "pcalc/pderiv.hpp"
#include "pcalc/pintegral.hpp"
#include "pcalc/riccati.hpp"
#include "pcalc/theorems.hpp"
#include "pcalc/weierstrass.hpp"

using namespace pcalc;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

std::vector<Expr> smooth_eight() {
  std::vector<Expr> out;
  for (const char* n : {"square", "cube", "sin", "cos", "exp", "ln", "sqrt", "rational"}) out.push_back(corpus_entry(n).f);
  return out;
}

std::vector<PFunction> regular_families(double alpha) {
  return {make_family(FamilyKind::khalil, alpha), make_family(FamilyKind::katugampola, alpha),
          make_family(FamilyKind::gfd, alpha, 1.5), make_family(FamilyKind::nderiv, alpha),
          make_family(FamilyKind::cosine, alpha)};
}

double limit(const PFunction& P, const RealFn& f, double t) { return p_derivative_limit(P, f, t, Side::both, 1e-9).value; }

// 1. limit vs multiplier formula
Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ut(0.1, 1.4);
  double worst = 0.0;
  int n = 0;
  for (double alpha : {0.1, 0.5, 0.9}) {
    const std::vector<PFunction> fams{make_family(FamilyKind::khalil, alpha), make_family(FamilyKind::katugampola, alpha),
                                      make_family(FamilyKind::gfd, alpha, 1.5), make_family(FamilyKind::cosine, alpha)};
    for (const PFunction& P : fams)
      for (const Expr& f : smooth_eight())
        for (int i = 0; i < 20; ++i) {
          const double t = ut(rng);
          const double formula = p_derivative_formula(P, f, t);
          const double lim = p_derivative_limit(P, f, t, Side::both, 1e-9).value;
          worst = std::max(worst, rel(lim, formula));
          ++n;
        }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-6 && secs < 30.0,
          std::to_string(n) + " cases, max rel diff " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 2. family equivalences and the gamma coefficient
Outcome criterion2() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ua(0.05, 0.95), ut(0.1, 3.0), ub(0.6, 4.0);
  const auto fs = smooth_eight();
  std::uniform_int_distribution<std::size_t> uf(0, fs.size() - 1);
  double worst_eq = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double alpha = ua(rng), t = ut(rng);
    const Expr& f = fs[uf(rng)];
    const ComparisonReport r =
        compare_definitions(make_family(FamilyKind::khalil, alpha), make_family(FamilyKind::katugampola, alpha), f, t, 1e-10);
    worst_eq = std::max(worst_eq, r.abs_diff);
  }
  for (int i = 0; i < 100; ++i) {
    const double alpha = ua(rng), t = ut(rng), beta = ub(rng);
    const Expr& f = fs[uf(rng)];
    const ComparisonReport r = compare_definitions(make_family(FamilyKind::gfd, alpha, beta),
                                                   make_family(FamilyKind::khalil, alpha), f, t, 1e-10);
    if (std::abs(r.value_2) < 1e-3) continue;  // ratio of two near-zero derivatives
    const double want = std::tgamma(beta) / std::tgamma(beta - alpha + 1.0);
    worst_ratio = std::max(worst_ratio, std::abs(r.ratio - want));
  }
  using boost::multiprecision::cpp_bin_float_50;
  const double sqrt_pi = boost::math::constants::root_pi<cpp_bin_float_50>().convert_to<double>();
  const double gamma_err = std::abs(evaluate(parse("gamma(x)"), Env{{"x", 0.5}}) - sqrt_pi);
  return {worst_eq < 1e-7 && worst_ratio < 1e-8 && gamma_err < 1e-10,
          "khalil/katugampola max diff " + fmt(worst_eq) + ", gfd ratio max err " + fmt(worst_ratio) +
              ", |gamma(0.5) - sqrt(pi)| = " + fmt(gamma_err)};
}

// 3. sum, product, quotient and chain rules
Outcome criterion3() {
  std::vector<Expr> fs;
  for (const CorpusEntry& e : corpus_list())
    if (e.smooth) fs.push_back(e.f);
  double worst = 0.0;
  int n = 0;
  for (double alpha : {0.3, 0.8}) {
    for (const PFunction& P : regular_families(alpha)) {
      for (const Expr& fe : fs) {
        for (const Expr& ge : fs) {
          const RealFn f = as_function(fe, "t"), g = as_function(ge, "t");
          for (double t : {0.35, 1.2}) {
            const double df = limit(P, f, t), dg = limit(P, g, t);
            worst = std::max(worst, rel(limit(P, [&](double x) { return f(x) + g(x); }, t), df + dg));
            worst = std::max(worst, rel(limit(P, [&](double x) { return f(x) * g(x); }, t), f(t) * dg + g(t) * df));
            if (std::abs(g(t)) > 0.1)
              worst = std::max(worst, rel(limit(P, [&](double x) { return f(x) / g(x); }, t),
                                          (g(t) * df - f(t) * dg) / (g(t) * g(t))));
            worst = std::max(worst, rel(limit(P, [&](double x) { return std::sin(f(x)); }, t), std::cos(f(t)) * df));
            n += 4;
          }
        }
      }
    }
  }
  return {worst < 1e-6, std::to_string(n) + " rule checks, max residual " + fmt(worst)};
}

// 4. fundamental theorem both ways
Outcome criterion4() {
  const std::vector<PFunction> fams{make_family(FamilyKind::khalil, 0.5), make_family(FamilyKind::katugampola, 0.5),
                                    make_family(FamilyKind::gfd, 0.5, 1.5)};
  double fwd = 0.0, bwd = 0.0;
  int functions = 0;
  for (const CorpusEntry& e : corpus_list()) {
    if (!e.smooth) continue;
    ++functions;
    for (const PFunction& P : fams) {
      const double a = (e.name == "ln") ? 0.2 : 0.0;  // ln is unbounded at 0
      fwd = std::max(fwd, ftc_forward(P, e.f, a, 1.3, 1e-8));
      bwd = std::max(bwd, ftc_backward(P, e.f, a, 1.3, 1e-10));
    }
  }
  double closed = 0.0;
  for (double alpha : {0.1, 0.5, 0.9}) {
    const PFunction P = make_family(FamilyKind::khalil, alpha);
    for (double t : {0.5, 2.0}) {
      closed = std::max(closed, std::abs(p_integral(P, parse("1"), 0.0, t, 1e-10).value - std::pow(t, alpha) / alpha));
      closed = std::max(closed, std::abs(p_integral(P, parse("t"), 0.0, t, 1e-10).value -
                                         std::pow(t, alpha + 1.0) / (alpha + 1.0)));
    }
  }
  return {functions >= 10 && fwd < 1e-5 && bwd < 1e-6 && closed < 1e-9,
          std::to_string(functions) + " functions x 3 families: forward " + fmt(fwd) + ", backward " + fmt(bwd) +
              ", closed forms " + fmt(closed)};
}

// 5. mean value theorem
Outcome criterion5() {
  const PFunction cu = make_family(FamilyKind::custom, 0.5, std::nullopt, parse("t + t*h + t^3*h^3"));
  const MvtResult ex = find_mvt_point(cu, parse("abs(t)"), -1.0, 2.0, 1e-8);
  const double width = ex.bracket.second - ex.bracket.first;
  const bool example_ok = std::abs(ex.c) <= 1e-10 && width <= 1e-10;

  const std::vector<PFunction> fams{make_family(FamilyKind::khalil, 0.5), make_family(FamilyKind::katugampola, 0.5),
                                    make_family(FamilyKind::gfd, 0.5, 1.5), make_family(FamilyKind::cosine, 0.5)};
  constexpr double a = 0.3, b = 1.4;
  constexpr int N = 100000;
  double worst_res = 0.0;
  int confirmed = 0, total = 0;
  for (const PFunction& P : fams) {
    for (const CorpusEntry& e : corpus_list()) {
      if (!e.smooth) continue;
      ++total;
      const MvtResult r = find_mvt_point(P, e.f, a, b, 1e-8);
      worst_res = std::max(worst_res, r.residual);
      // independent residual from the multiplier formula
      const RealFn df = as_function(*e.fprime, "t"), f = as_function(e.f, "t");
      const double slope = (f(b) - f(a)) / (b - a);
      auto res = [&](double c) { return ph_zero(P, c) * (df(c) - slope); };
      if (r.degenerate) {
        double mx = 0.0;
        for (int i = 1; i < N; ++i) mx = std::max(mx, std::abs(res(a + (b - a) * i / N)));
        confirmed += mx < 1e-8;
        continue;
      }
      const double dx = (b - a) / N;
      bool ok = false;
      for (int i = 1; i + 1 < N && !ok; ++i) {
        const double x0 = a + dx * i, x1 = x0 + dx;
        const double r0 = res(x0), r1 = res(x1);
        if ((r0 <= 0 && r1 >= 0) || (r0 >= 0 && r1 <= 0)) ok = r.c >= x0 - dx && r.c <= x1 + dx;
      }
      confirmed += ok;
    }
  }
  return {example_ok && worst_res < 1e-6 && confirmed == total,
          "|t| example c = " + fmt(ex.c) + " bracket " + fmt(width) + "; corpus max residual " + fmt(worst_res) +
              ", brute-force confirmed " + std::to_string(confirmed) + "/" + std::to_string(total)};
}

// 6. exceptional case p = t + h^2
Outcome criterion6() {
  const PFunction pw = make_family(FamilyKind::power, 2.0);
  const double d_abs = p_derivative_limit(pw, parse("abs(t)"), 0.0, Side::both, 1e-8).value;
  const double d_sqrt = p_derivative_limit(pw, parse("sqrt(t)"), 0.0, Side::right, 1e-8).value;
  std::vector<std::pair<double, double>> saw;
  for (int i = 0; i <= 10; ++i) saw.emplace_back(0.25 * i - 1.0, (i % 2) ? 1.0 : -0.5);
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(-1.25 + 0.05 * i);
  double worst = 0.0;
  for (const auto& d : polygonal_derivative_scan(Polygon(saw), pw, grid)) worst = std::max(worst, std::abs(d.value));
  const std::vector<double> g0{-0.5, 0.0, 0.5};
  for (const auto& d : polygonal_derivative_scan(Polygon({{-1, 1}, {0, 0}, {1, 1}}), pw, g0))
    worst = std::max(worst, std::abs(d.value));
  return {std::abs(d_abs) < 1e-6 && std::abs(d_sqrt - 1.0) <= 1e-4 && worst < 1e-6,
          "D_p|x|(0) = " + fmt(d_abs) + ", right D_p sqrt(0) = " + fmt(d_sqrt) + ", polygon max " + fmt(worst)};
}

// 7. Riccati
Outcome criterion7() {
  RiccatiProblem pr{make_family(FamilyKind::khalil, 0.5), parse("0")};
  pr.u0 = 1.0;
  pr.T = 0.05;
  pr.grid_n = 64;
  pr.tol = 1e-10;
  const RiccatiSolution s = solve_riccati(pr);
  const double k = s.certificate.k;
  double err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = pr.T * i / 1000;
    err = std::max(err, std::abs(riccati_value(pr.P, s, t) - 1.0 / (1.0 + 2.0 * std::sqrt(t))));
  }
  double ratio = 0.0;
  for (std::size_t n = 1; n < s.update_norms.size(); ++n)
    ratio = std::max(ratio, s.update_norms[n] / s.update_norms[n - 1]);
  RiccatiProblem z = pr;
  z.initial_value = 0.0;
  const RiccatiSolution sz = solve_riccati(z);
  double uniq = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) uniq = std::max(uniq, std::abs(s.u[j] - sz.u[j]));

  RiccatiProblem c{make_family(FamilyKind::khalil, 1.0), parse("1")};
  c.u0 = 0.0;
  c.T = 0.4;
  c.grid_n = 64;
  c.tol = 1e-10;
  const RiccatiSolution sc = solve_riccati(c);
  double err_tanh = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = c.T * i / 1000;
    err_tanh = std::max(err_tanh, std::abs(riccati_value(c.P, sc, t) - std::tanh(t)));
  }
  return {k >= 0.88 && k <= 0.90 && err < 1e-5 && ratio <= k + 0.05 && uniq < 1e-7 && err_tanh < 1e-5,
          "k = " + fmt(k) + ", max err " + fmt(err) + ", max ratio " + fmt(ratio) + ", two-start diff " + fmt(uniq) +
              ", tanh err " + fmt(err_tanh)};
}

// 8. Weierstrass quotients
Outcome criterion8() {
  const WeierstrassParams W = make_weierstrass(41, 0.9, 2.0);
  const double coef = lower_bound_coefficient(W);
  const double rate = std::sqrt(41.0) * 0.9;
  bool bound_ok = true, exact_ok = true, ratio_ok = true;
  std::string ratios;
  for (const Rational& x : {Rational(0), Rational(1, 3)}) {
    std::vector<HmStep> steps;
    try {
      steps = divergence_report(W, x, 6, 1e-8);
    } catch (const BoundViolation& e) {
      steps = e.steps();
      bound_ok = false;
    }
    Integer am = 1;
    for (const HmStep& s : steps) {
      am *= W.a;
      exact_ok = exact_ok && (x * am - s.alpha_m - s.t_m == 0);
      bound_ok = bound_ok && s.quotient >= s.lower_bound;
    }
    ratios += " x=" + rational_to_string(x) + ":";
    for (std::size_t m = 3; m <= steps.size(); ++m) {
      const double r = steps[m - 1].quotient / steps[m - 2].quotient;
      ratios += " " + fmt(r);
      ratio_ok = ratio_ok && r >= 0.8 * rate && r <= 1.2 * rate;
    }
  }
  const bool coef_ok = std::abs(coef - 0.7093) <= 1e-3;
  return {bound_ok && exact_ok && ratio_ok && coef_ok,
          std::string("bound ") + (bound_ok ? "ok" : "violated") + ", coefficient " + fmt(coef) + ", exact " +
              (exact_ok ? "ok" : "broken") + ", ratios (band " + fmt(0.8 * rate) + ".." + fmt(1.2 * rate) + ")" +
              ratios};
}

// 9. Hypothesis (H)
Outcome criterion9() {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const HReport k = check_hypothesis_H(make_family(FamilyKind::khalil, 0.5), 1.0, eps);
  const HReport kat = check_hypothesis_H(make_family(FamilyKind::katugampola, 0.5), 1.0, eps);
  bool power_fails = true;
  for (double t : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    const HReport p = check_hypothesis_H(make_family(FamilyKind::power, 2.0), t, eps);
    power_fails = power_fails && !p.verdict_minus && p.verdict_plus;
  }
  const bool ok = k.verdict_plus && k.verdict_minus && kat.verdict_plus && kat.verdict_minus && power_fails;
  return {ok, std::string("khalil ") + (k.verdict_plus && k.verdict_minus ? "both" : "not both") + ", katugampola " +
                  (kat.verdict_plus && kat.verdict_minus ? "both" : "not both") + ", power minus side " +
                  (power_fails ? "fails at every t" : "passes somewhere")};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
