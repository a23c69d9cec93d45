#pragma once

#include <cstddef>

#include "afc/errors.hpp"
#include "afc/units.hpp"

namespace afc {

// Uniform angular-frequency grid centered on the comb center (omega = 0).
// Sample k sits at (k - count/2) * spacing, k = 0 .. count-1, so the layout
// is the fftshifted view of the FFT bin order.
struct SpectralGrid {
  double spacing = 0.0;     // rad/s
  std::size_t count = 0;    // power of two

  double omega(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(count) / 2.0) * spacing;
  }
  double span() const { return spacing * static_cast<double>(count); }

  // centered index <-> FFT bin order (involution for even count)
  std::size_t to_bin(std::size_t k) const { return (k + count / 2) % count; }

  void validate() const;
};

// Uniform time grid, samples at start + i*dt, i = 0 .. count-1.
struct TimeGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;    // power of two

  double dt() const { return (stop - start) / static_cast<double>(count); }
  double time(std::size_t i) const { return start + static_cast<double>(i) * dt(); }

  // The Fourier-dual spectral grid (same sample count).
  SpectralGrid dual() const {
    return SpectralGrid{two_pi / (stop - start), count};
  }

  void validate() const;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace afc
