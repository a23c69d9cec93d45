#pragma once

#include <cstddef>
#include <vector>

namespace afc::detail {

// Catmull-Rom cubic on a uniform node grid; query x in node-index units
// (node j sits at x = j). Endpoints clamp to one-sided stencils.
inline double catmull_rom(const std::vector<double>& y, double x) {
  const std::size_t m = y.size();
  if (m == 1) return y[0];
  std::size_t i = x <= 0.0 ? 0 : static_cast<std::size_t>(x);
  if (i > m - 2) i = m - 2;
  const double u = x - static_cast<double>(i);
  const double p0 = y[i > 0 ? i - 1 : 0];
  const double p1 = y[i];
  const double p2 = y[i + 1];
  const double p3 = y[i + 2 < m ? i + 2 : m - 1];
  return 0.5 * (2.0 * p1 + (-p0 + p2) * u +
                (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u * u +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u * u * u);
}

}  // namespace afc::detail
