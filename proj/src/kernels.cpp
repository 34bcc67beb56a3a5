#include "pcalc/kernels.hpp"

#include <exception>

namespace pcalc::kernels {

namespace {

double panel_sum(std::span<const double> weight, std::span<const double> source,
                 std::span<const int> stencil_index, std::span<const double> stencil_weight,
                 std::span<const double> u, std::size_t ppp, std::size_t panel) {
  double acc = 0.0;
  for (std::size_t g = 0; g < ppp; ++g) {
    const std::size_t i = panel * ppp + g;
    double ui = 0.0;
    for (std::size_t s = 0; s < 4; ++s)
      ui += stencil_weight[4 * i + s] * u[static_cast<std::size_t>(stencil_index[4 * i + s])];
    acc += weight[i] * (source[i] - ui * ui);
  }
  return acc;
}

}  // namespace

std::vector<double> map_grid(const RealFn& fn, std::span<const double> points) {
  const auto n = static_cast<long>(points.size());
  std::vector<double> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = fn(points[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void panel_sums(std::span<const double> weight, std::span<const double> source,
                std::span<const int> stencil_index, std::span<const double> stencil_weight,
                std::span<const double> u, std::size_t points_per_panel, std::span<double> out) {
  const auto panels = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long p = 0; p < panels; ++p)
    out[static_cast<std::size_t>(p)] = panel_sum(weight, source, stencil_index, stencil_weight, u,
                                                 points_per_panel, static_cast<std::size_t>(p));
}

namespace serial {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

std::vector<double> map_grid(const RealFn& fn, std::span<const double> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) out.push_back(fn(x));
  return out;
}

void panel_sums(std::span<const double> weight, std::span<const double> source,
                std::span<const int> stencil_index, std::span<const double> stencil_weight,
                std::span<const double> u, std::size_t points_per_panel, std::span<double> out) {
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = panel_sum(weight, source, stencil_index, stencil_weight, u, points_per_panel, p);
}

}  // namespace serial

}  // namespace pcalc::kernels
