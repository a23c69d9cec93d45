#pragma once

#include <iosfwd>
#include <vector>

#include "afc/grids.hpp"
#include "afc/units.hpp"

namespace afc {

// Atomic frequency comb: Gaussian peaks of FWHM peak_width_fwhm spaced by
// peak_spacing, symmetric about omega = 0 (the signal carrier).
struct CombSpec {
  double peak_width_fwhm = 0.0;  // gamma, rad/s
  double peak_spacing = 0.0;     // Delta, rad/s
  int peak_count = 0;
  double depth_per_peak = 0.0;   // alpha*L per peak

  double bandwidth() const { return peak_count * peak_spacing; }  // Gamma
  double echo_time() const { return two_pi / peak_spacing; }
  double mode_duration() const { return 12.0 * pi / bandwidth(); }
  double peak_center(int k) const {
    return (k - 0.5 * (peak_count - 1)) * peak_spacing;
  }

  void validate() const;
};

struct DepthProfile {
  SpectralGrid grid;
  std::vector<double> depth;  // d(omega) >= 0, centered-grid order
  std::vector<double> phase;  // dispersion phi(omega), radians
};

double comb_finesse(const CombSpec& spec);

struct Capacity {
  double real = 0.0;
  int integer = 0;
};

// Modes of duration 12*pi/Gamma that fit into the storage window
// [t_cut, 2*pi/Delta].
Capacity multimode_capacity(const CombSpec& spec, double t_cut);

// d(omega) as the sum of Gaussian peaks; phi(omega) as the causal
// (Kramers-Kronig) partner of d/2 via an FFT Hilbert transform.
DepthProfile build_depth_profile(const CombSpec& spec, const SpectralGrid& grid);

// Ensures the grid resolves the peaks and covers the comb plus guard band.
void validate_grid_for_comb(const SpectralGrid& grid, const CombSpec& spec);

// CSV: omega_rad_s,depth,phase_rad
void write_depth_csv(std::ostream& os, const DepthProfile& profile);

}  // namespace afc
