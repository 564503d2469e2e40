#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace optomech {

/// Maximum of a sampled signal over [t_from, t_to], refined by the vertex of
/// the parabola through the best sample and its two neighbours. Returns the
/// (time, value) pair. Throws ConfigError when no sample lies in the window.
std::pair<double, double> refined_max(std::span<const double> times, std::span<const double> values,
                                      double t_from, double t_to);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Index range [first, last) of samples with t_from <= t <= t_to (inclusive,
/// with a relative slack of 1e-9 on both ends).
std::pair<std::size_t, std::size_t> window_indices(std::span<const double> times, double t_from,
                                                   double t_to);

/// Vertex value of the parabola through three points; falls back to the
/// largest of the three when the points are collinear or the vertex leaves
/// [x0, x2].
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                                          double y2);

}  // namespace optomech
