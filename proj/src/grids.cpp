#include "afc/grids.hpp"

#include <cmath>

namespace afc {

void SpectralGrid::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ModelError("spectral grid: spacing must be positive and finite");
  if (!is_power_of_two(count))
    throw ModelError("spectral grid: sample count must be a power of two");
}

void TimeGrid::validate() const {
  if (!(stop > start) || !std::isfinite(start) || !std::isfinite(stop))
    throw ModelError("time grid: need finite stop > start");
  if (!is_power_of_two(count))
    throw ModelError("time grid: sample count must be a power of two");
}

}  // namespace afc
