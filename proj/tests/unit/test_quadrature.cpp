#include <doctest.h>

#include <cmath>

#include "pcalc/error.hpp"
#include "pcalc/quadrature.hpp"

using namespace pcalc;

TEST_CASE("smooth integrals") {
  const auto r = adaptive_gk15([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(std::abs(r.value - 2.0) < 1e-12);
  CHECK(r.error_estimate <= 1e-12);
  const auto q = adaptive_gk15([](double x) { return std::exp(-x * x); }, -5.0, 5.0, 1e-12);
  CHECK(std::abs(q.value - std::sqrt(M_PI)) < 1e-11);
  const auto rev = adaptive_gk15([](double x) { return x; }, 1.0, 0.0, 1e-12);
  CHECK(std::abs(rev.value + 0.5) < 1e-14);
}

TEST_CASE("failures are reported") {
  CHECK_THROWS_AS(adaptive_gk15([](double) { return NAN; }, 0.0, 1.0, 1e-8), NumericalFailure);
  CHECK_THROWS_AS(adaptive_gk15([](double x) { return std::sin(1.0 / x) / x; }, 1e-9, 1.0, 1e-12, 50),
                  NumericalFailure);
}

TEST_CASE("endpoint exponent estimate") {
  auto w = [](double g) { return [g](double x) { return std::pow(x, -g); }; };
  CHECK(endpoint_singularity_exponent(w(0.5), 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(endpoint_singularity_exponent(w(0.9), 0.0, 1.0) == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(endpoint_singularity_exponent([](double) { return 1.0; }, 0.0, 1.0) == 0.0);
  CHECK(std::isinf(endpoint_singularity_exponent([](double x) { return 1.0 / (x * x * 0.0); }, 0.0, 1.0)));
}

TEST_CASE("graded integration of power singularities") {
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (double tol : {1e-6, 1e-9}) {
      auto weight = [alpha](double x) { return std::pow(x, alpha - 1.0); };
      const auto one = integrate_graded(weight, weight, 0.0, 4.0, tol);
      CHECK(std::abs(one.value - std::pow(4.0, alpha) / alpha) < tol);
      CHECK(one.graded);
      const auto lin = integrate_graded([&](double x) { return x * weight(x); }, weight, 0.0, 4.0, tol);
      CHECK(std::abs(lin.value - std::pow(4.0, alpha + 1.0) / (alpha + 1.0)) < tol);
    }
  }
  // f carries the singularity itself; weight only locates it.
  // singular at the right end and at both ends
  auto right = [](double x) { return 1.0 / std::sqrt(1.0 - x); };
  CHECK(std::abs(integrate_graded(right, right, 0.0, 1.0, 1e-10).value - 2.0) < 1e-10);
  auto both = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
  // 1 - x cancels next to the right end, which floors the error near sqrt(eps).
  CHECK(std::abs(integrate_graded(both, both, 0.0, 1.0, 1e-7).value - M_PI) < 1e-7);
  auto inv = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(integrate_graded(inv, inv, 0.0, 1.0, 1e-8), NumericalFailure);
  CHECK(integrate_graded(inv, inv, 2.0, 1.0, 1e-12).value ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}
