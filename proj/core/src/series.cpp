#include "optomech/series.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/errors.hpp"

namespace optomech {

std::pair<std::size_t, std::size_t> window_indices(std::span<const double> times, double t_from,
                                                   double t_to) {
  const double slack = 1e-9 * std::max({1.0, std::abs(t_from), std::abs(t_to)});
  const auto lo = std::lower_bound(times.begin(), times.end(), t_from - slack);
  const auto hi = std::upper_bound(times.begin(), times.end(), t_to + slack);
  return {static_cast<std::size_t>(lo - times.begin()), static_cast<std::size_t>(hi - times.begin())};
}

std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                                          double y2) {
  const double best_y = std::max({y0, y1, y2});
  const double best_x = best_y == y1 ? x1 : (best_y == y0 ? x0 : x2);
  // Newton divided differences.
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv < 0.0)) return {best_x, best_y};
  // y(x) = y0 + d01 (x - x0) + curv (x - x0)(x - x1)
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  if (xv < x0 || xv > x2) return {best_x, best_y};
  const double yv = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
  return {xv, std::max(yv, best_y)};
}

std::pair<double, double> refined_max(std::span<const double> times, std::span<const double> values,
                                      double t_from, double t_to) {
  const auto [first, last] = window_indices(times, t_from, t_to);
  if (first >= last) throw ConfigError("no samples in the requested window");
  std::size_t best = first;
  for (std::size_t i = first; i < last; ++i) {
    if (values[i] > values[best]) best = i;
  }
  if (best == 0 || best + 1 >= times.size()) return {times[best], values[best]};
  return parabola_vertex(times[best - 1], values[best - 1], times[best], values[best],
                         times[best + 1], values[best + 1]);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw ConfigError("least-squares fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ConfigError("least-squares fit needs distinct abscissae");
  return sxy / sxx;
}

}  // namespace optomech
