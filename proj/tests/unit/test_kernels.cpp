#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcalc/kernels.hpp"
#include "support.hpp"

using namespace pcalc;

TEST_CASE("map_grid matches the serial reference bit for bit") {
  std::vector<double> pts(5000);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = -3.0 + 6.0 * static_cast<double>(i) / 4999.0;
  const RealFn f = [](double x) { return std::sin(x) * std::exp(-x * x); };
  CHECK(kernels::map_grid(f, pts) == kernels::serial::map_grid(f, pts));
}

TEST_CASE("lowest failing index wins") {
  std::vector<double> pts{0, 1, 2, 3, 4, 5, 6, 7};
  const RealFn f = [](double x) -> double {
    if (x >= 3.0) throw std::runtime_error("at " + std::to_string(static_cast<int>(x)));
    return x;
  };
  for (int rep = 0; rep < 5; ++rep) {
    try {
      kernels::map_grid(f, pts);
      FAIL("expected throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "at 3");
    }
  }
  try {
    kernels::for_each_index(100, [](std::size_t i) {
      if (i % 7 == 5) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "5");
  }
}

TEST_CASE("for_each_index visits every index once") {
  std::vector<int> hits(1000, 0);
  kernels::for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("panel_sums parallel equals serial") {
  testing::Gen g(5);
  const std::size_t panels = 200, ppp = 8, n = panels * ppp;
  std::vector<double> w(n), src(n), sw(4 * n), u(panels + 1);
  std::vector<int> si(4 * n);
  for (auto& v : w) v = g.uniform(0.0, 0.1);
  for (auto& v : src) v = g.uniform(-1.0, 1.0);
  for (auto& v : sw) v = g.uniform(-0.5, 1.0);
  for (auto& v : u) v = g.uniform(-2.0, 2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 4; ++k) si[4 * i + k] = std::min<int>(static_cast<int>(i / ppp) + k, static_cast<int>(panels));
  std::vector<double> a(panels), b(panels);
  kernels::panel_sums(w, src, si, sw, u, ppp, a);
  kernels::serial::panel_sums(w, src, si, sw, u, ppp, b);
  CHECK(a == b);
  // direct evaluation of one panel
  double want = 0.0;
  for (std::size_t gq = 0; gq < ppp; ++gq) {
    double ui = 0.0;
    for (int k = 0; k < 4; ++k) ui += sw[4 * gq + k] * u[si[4 * gq + k]];
    want += w[gq] * (src[gq] - ui * ui);
  }
  CHECK(a[0] == doctest::Approx(want).epsilon(1e-14));
}
