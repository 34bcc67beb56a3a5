#include "pcalc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "pcalc/error.hpp"

namespace pcalc {

namespace {

// Kronrod abscissae on [0,1) of the 15-point rule; odd indices are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, value, error;
};

struct WorstFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

Panel gk15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[static_cast<std::size_t>(j)] = f1;
    fv2[static_cast<std::size_t>(j)] = f2;
    resk += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
    resabs += kWgk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  if (!std::isfinite(result) || !std::isfinite(err))
    throw NumericalFailure("integrand is not finite on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
  return {a, b, result, err};
}

}  // namespace

QuadratureResult adaptive_gk15(const RealFn& f, double a, double b, double tol,
                               std::size_t max_subdivisions) {
  if (a == b) return {};
  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> queue;
  Panel first = gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  queue.push(first);
  std::size_t count = 1;
  while (error > std::max(tol, 100.0 * kEps * std::abs(value))) {
    if (count >= max_subdivisions)
      throw NumericalFailure("adaptive quadrature did not reach tolerance " + std::to_string(tol) +
                             " (error estimate " + std::to_string(error) + ")");
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    queue.pop();
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    queue.push(left);
    queue.push(right);
    ++count;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Final sum in interval order.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  value = 0.0;
  error = 0.0;
  for (const auto& p : panels) {
    value += p.value;
    error += p.error;
  }
  return {value, error, count, false};
}

double endpoint_singularity_exponent(const RealFn& weight, double endpoint, double inward) {
  const double span = inward - endpoint;
  auto sample = [&](double frac) -> double {
    try {
      return std::abs(weight(endpoint + span * frac));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double w_far = sample(1e-6);
  const double w_near = sample(1e-9);
  if (!std::isfinite(w_far) || !std::isfinite(w_near)) return std::numeric_limits<double>::infinity();
  if (w_far == 0.0 || w_near == 0.0) return 0.0;
  const double gamma = std::log(w_near / w_far) / std::log(1e3);
  return gamma > 0.02 ? gamma : 0.0;
}

QuadratureResult integrate_graded(const RealFn& f, const RealFn& weight, double a, double b,
                                  double tol) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate_graded(f, weight, b, a, tol);
    r.value = -r.value;
    return r;
  }
  const double gamma_left = endpoint_singularity_exponent(weight, a, b);
  const double gamma_right = endpoint_singularity_exponent(weight, b, a);
  for (double g : {gamma_left, gamma_right})
    if (g >= 0.999)
      throw NumericalFailure("non-integrable endpoint singularity (exponent " +
                             (std::isfinite(g) ? std::to_string(g) : std::string("inf")) + ")");

  // Map [0,1] onto the half-interval [end, end + width] with density
  // clustering at `end`.
  auto graded_half = [&](double end, double width, double gamma, double half_tol) {
    const double s = std::min(1.0 / (1.0 - gamma), 40.0);
    const double lo = std::min(end, end + width);
    const double hi = std::max(end, end + width);
    RealFn mapped = [&, s, lo, hi](double u) -> double {
      const double x = end + width * std::pow(u, s);
      if (!(x > lo && x < hi)) return 0.0;
      return f(x) * std::abs(width) * s * std::pow(u, s - 1.0);
    };
    return adaptive_gk15(mapped, 0.0, 1.0, half_tol);
  };

  if (gamma_left == 0.0 && gamma_right == 0.0) return adaptive_gk15(f, a, b, tol);

  QuadratureResult out;
  out.graded = true;
  if (gamma_right == 0.0) {
    out = graded_half(a, b - a, gamma_left, tol);
  } else if (gamma_left == 0.0) {
    out = graded_half(b, a - b, gamma_right, tol);
  } else {
    const double mid = 0.5 * (a + b);
    const QuadratureResult left = graded_half(a, mid - a, gamma_left, 0.5 * tol);
    const QuadratureResult right = graded_half(b, mid - b, gamma_right, 0.5 * tol);
    out.value = left.value + right.value;
    out.error_estimate = left.error_estimate + right.error_estimate;
    out.subdivisions = left.subdivisions + right.subdivisions;
  }
  out.graded = true;
  return out;
}

}  // namespace pcalc
