#include "afc/comb.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "afc/csv.hpp"
#include "afc/fft.hpp"

namespace afc {

void CombSpec::validate() const {
  if (!(peak_width_fwhm > 0.0))
    throw ModelError("comb: peak width must be positive");
  if (!(peak_spacing > peak_width_fwhm))
    throw ModelError("comb: peaks not resolved (need spacing > width)");
  if (peak_count < 1) throw ModelError("comb: need at least one peak");
  if (depth_per_peak < 0.0) throw ModelError("comb: negative optical depth");
}

double comb_finesse(const CombSpec& spec) {
  if (!(spec.peak_width_fwhm > 0.0))
    throw ModelError("comb finesse: peak width must be positive");
  return spec.peak_spacing / spec.peak_width_fwhm;
}

Capacity multimode_capacity(const CombSpec& spec, double t_cut) {
  spec.validate();
  const double window = spec.echo_time();
  if (t_cut < 0.0 || !(t_cut < window))
    throw ModelError("capacity: control gate leaves no storage window");
  Capacity c;
  c.real = (window - t_cut) / spec.mode_duration();
  c.integer = std::max(0, static_cast<int>(std::floor(c.real)));
  return c;
}

void validate_grid_for_comb(const SpectralGrid& grid, const CombSpec& spec) {
  grid.validate();
  spec.validate();
  if (grid.spacing > spec.peak_width_fwhm / 8.0)
    throw ModelError("spectral grid too coarse: spacing must be <= gamma/8");
  if (grid.span() < 2.0 * spec.bandwidth())
    throw ModelError("spectral grid span too small: need >= 2*Gamma");
  // all peaks inside the sampled window
  const double edge = std::abs(spec.peak_center(0)) + 4.0 * spec.peak_width_fwhm;
  if (edge > 0.5 * grid.span())
    throw ModelError("spectral grid does not cover the comb");
}

DepthProfile build_depth_profile(const CombSpec& spec, const SpectralGrid& grid) {
  validate_grid_for_comb(grid, spec);
  const std::size_t n = grid.count;
  DepthProfile profile{grid, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

  // Gaussian tails below 1e-14 of the peak beyond ~8 FWHM
  const double gamma = spec.peak_width_fwhm;
  const double reach = 8.0 * gamma;
  const double coef = 4.0 * std::log(2.0) / (gamma * gamma);
  const double w0 = grid.omega(0);
  for (int k = 0; k < spec.peak_count; ++k) {
    const double wk = spec.peak_center(k);
    const auto lo = static_cast<std::ptrdiff_t>(std::floor((wk - reach - w0) / grid.spacing));
    const auto hi = static_cast<std::ptrdiff_t>(std::ceil((wk + reach - w0) / grid.spacing));
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
         i <= std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n) - 1); ++i) {
      const double dw = grid.omega(static_cast<std::size_t>(i)) - wk;
      profile.depth[static_cast<std::size_t>(i)] +=
          spec.depth_per_peak * std::exp(-coef * dw * dw);
    }
  }

  // Dispersion phase: fold the lag series of -d/2 onto causal lags so that
  // exp(-d/2 + i phi) is the minimum-phase response of the absorption.
  Fft fft(n);
  std::vector<cplx> a(n);
  for (std::size_t k = 0; k < n; ++k)
    a[grid.to_bin(k)] = cplx(-0.5 * profile.depth[k], 0.0);
  auto lag = fft.raw_forward(a);
  for (std::size_t m = 1; m < n / 2; ++m) lag[m] *= 2.0;
  for (std::size_t m = n / 2 + 1; m < n; ++m) lag[m] = 0.0;
  auto ln_h = fft.raw_backward(lag);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k)
    profile.phase[k] = ln_h[grid.to_bin(k)].imag() * scale;
  return profile;
}

void write_depth_csv(std::ostream& os, const DepthProfile& profile) {
  os << "omega_rad_s,depth,phase_rad\n";
  for (std::size_t k = 0; k < profile.grid.count; ++k)
    os << fmt_double(profile.grid.omega(k)) << ',' << fmt_double(profile.depth[k])
       << ',' << fmt_double(profile.phase[k]) << '\n';
}

}  // namespace afc
