#include <doctest.h>

#include <cmath>
#include <vector>

#include "pcalc/corpus.hpp"
#include "pcalc/error.hpp"
#include "pcalc/pderiv.hpp"
#include "pcalc/pintegral.hpp"
#include "support.hpp"

using namespace pcalc;

TEST_CASE("closed forms") {
  const PFunction k = make_family(FamilyKind::khalil, 0.5);
  CHECK(std::abs(p_integral(k, parse("1"), 0.0, 4.0, 1e-10).value - 4.0) < 1e-10);
  CHECK(std::abs(p_integral(k, parse("x"), 0.0, 4.0, 1e-10).value - std::pow(4.0, 1.5) / 1.5) < 1e-10);
  CHECK(p_integral(make_family(FamilyKind::cosine, 0.5), parse("0"), 0.0, 1.0, 1e-10).value == 0.0);
  for (double alpha : {0.1, 0.5, 0.9}) {
    const PFunction P = make_family(FamilyKind::khalil, alpha);
    for (double tol : {1e-6, 1e-9}) {
      for (double t : {0.3, 1.0, 3.0}) {
        CHECK(std::abs(p_integral(P, parse("1"), 0.0, t, tol).value - std::pow(t, alpha) / alpha) < tol);
        CHECK(std::abs(p_integral(P, parse("t"), 0.0, t, tol).value - std::pow(t, alpha + 1) / (alpha + 1)) < tol);
      }
    }
  }
  CHECK_THROWS_AS(p_integral(k, parse("1"), 2.0, 1.0, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(p_integral(make_family(FamilyKind::power, 2.0), parse("1"), 0.0, 1.0, 1e-8), DomainError);
}

TEST_CASE("fundamental theorem examples") {
  const PFunction k = make_family(FamilyKind::khalil, 0.5);
  CHECK(ftc_forward(k, parse("1"), 0.0, 1.0, 1e-8) < 1e-5);
  CHECK(ftc_forward(k, parse("sin(t)"), 0.1, 1.0, 1e-8) < 1e-5);
  CHECK(ftc_forward(k, parse("0"), 0.0, 1.0, 1e-8) < 1e-10);
  CHECK(ftc_backward(k, parse("t^2"), 0.0, 1.0, 1e-8) < 1e-6);
  CHECK(std::abs(p_integral(k, p_derivative_formula_fn(k, parse("t^2")), 0.0, 1.0, 1e-10).value - 1.0) < 1e-9);
  CHECK(ftc_backward(k, parse("4"), 0.0, 1.0, 1e-8) < 1e-10);
  const PFunction g = make_family(FamilyKind::gfd, 0.5, 1.5);
  CHECK(ftc_backward(g, parse("t^3"), 1.0, 2.0, 1e-8) < 1e-6);
  CHECK(std::abs(p_integral(g, p_derivative_formula_fn(g, parse("t^3")), 1.0, 2.0, 1e-10).value - 7.0) < 1e-9);
}

TEST_CASE("integration by parts") {
  const PFunction k = make_family(FamilyKind::khalil, 0.5);
  CHECK(integration_by_parts_check(k, parse("t"), parse("t^2"), 1.0, 2.0, 1e-8) < 1e-6);
  const double ibp = integration_by_parts_check(k, parse("1"), parse("sin(t)"), 1.0, 2.0, 1e-10);
  const double ftc = ftc_backward(k, parse("sin(t)"), 1.0, 2.0, 1e-10);
  CHECK(std::abs(ibp - ftc) < 1e-10);
  CHECK(integration_by_parts_check(make_family(FamilyKind::katugampola, 0.3), parse("sin(t)"), parse("cos(t)"), 0.5,
                                   1.5, 1e-8) < 1e-6);
}

TEST_CASE("FTC round trip over the corpus and three families") {
  const std::vector<PFunction> fams{make_family(FamilyKind::khalil, 0.5), make_family(FamilyKind::katugampola, 0.5),
                                    make_family(FamilyKind::gfd, 0.5, 1.5)};
  int count = 0;
  for (const CorpusEntry& e : corpus_list()) {
    if (!e.smooth) continue;
    ++count;
    for (const PFunction& P : fams) {
      CAPTURE(e.name);
      CAPTURE(family_name(P.kind()));
      const double a = e.name == "ln" || e.name == "sqrt" ? 0.2 : 0.0;
      CHECK(ftc_forward(P, e.f, a, 1.3, 1e-8) < 1e-5);
      CHECK(ftc_backward(P, e.f, a, 1.3, 1e-9) < 1e-5);
    }
  }
  CHECK(count >= 10);
}

TEST_CASE("I_p of a nonnegative function is nondecreasing") {
  testing::Gen g(31);
  const PFunction P = make_family(FamilyKind::katugampola, 0.6);
  const Expr f = parse("1 + sin(3*t)");
  double prev = 0.0;
  for (int i = 1; i <= 30; ++i) {
    const double t = 0.1 * i;
    const double v = p_integral(P, f, 0.0, t, 1e-10).value;
    CHECK(v >= prev - 1e-10);
    prev = v;
  }
}
