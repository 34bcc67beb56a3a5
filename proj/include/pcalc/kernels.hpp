#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference under `serial::` with identical results; tests compare the two
// and bench/ times them.

#include <functional>
#include <span>
#include <vector>

#include "pcalc/expr.hpp"

namespace pcalc::kernels {

/// fn(points[i]) for every i. If any evaluation throws, the exception of the
/// lowest failing index is rethrown after the loop.
std::vector<double> map_grid(const RealFn& fn, std::span<const double> points);

/// body(i) for i in [0, n). Exceptions are collected per index and the one
/// of the lowest index is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

/// One Picard sweep's panel integrals. For each panel p and each of its
/// `points_per_panel` quadrature points g (flattened index i = p*ppp + g):
///   out[p] = sum_g weight[i] * (source[i] - u_i^2),
///   u_i    = sum_{s<4} stencil_weight[4i+s] * u[stencil_index[4i+s]].
void panel_sums(std::span<const double> weight, std::span<const double> source,
                std::span<const int> stencil_index, std::span<const double> stencil_weight,
                std::span<const double> u, std::size_t points_per_panel, std::span<double> out);

namespace serial {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

std::vector<double> map_grid(const RealFn& fn, std::span<const double> points);

void panel_sums(std::span<const double> weight, std::span<const double> source,
                std::span<const int> stencil_index, std::span<const double> stencil_weight,
                std::span<const double> u, std::size_t points_per_panel, std::span<double> out);

}  // namespace serial

}  // namespace pcalc::kernels
