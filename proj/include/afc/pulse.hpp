#pragma once

#include <iosfwd>
#include <vector>

#include "afc/grids.hpp"
#include "afc/units.hpp"

namespace afc {

enum class PulseKind { Pi, AllenEberly };

// Control pulse on the |e>-|s> transition. Sech envelope for both kinds;
// AllenEberly adds the tanh frequency sweep. The envelope is gated to zero
// outside a square window of full width t_cut centered on center_time.
struct ControlPulse {
  PulseKind kind = PulseKind::Pi;
  double omega_max = 0.0;   // peak Rabi frequency, rad/s
  double tau_c = 0.0;       // characteristic time, s
  double chirp_span = 0.0;  // Delta^max, rad/s (0 for Pi)
  double t_cut = 0.0;       // gate full width, s
  double center_time = 0.0; // on the protocol timeline, s

  double gate_begin() const { return center_time - 0.5 * t_cut; }
  double gate_end() const { return center_time + 0.5 * t_cut; }
  bool same_shape(const ControlPulse& o) const;

  void validate() const;
};

// Omega_c(t) = omega_max * sech((t-center)/tau_c) inside the gate, 0 outside.
double rabi_envelope(const ControlPulse& pulse, double t);

// Delta_j(t) = chirp_span * tanh((t-center)/tau_c) + atom_detuning.
double instantaneous_detuning(const ControlPulse& pulse, double atom_detuning,
                              double t);

// Integral of the gated envelope (radians). Converges to
// pi * omega_max * tau_c as t_cut -> infinity.
double pulse_area(const ControlPulse& pulse);

struct AdiabaticityReport {
  bool covers_band = false;   // 2*Delta^max >= Gamma
  bool duration_ok = false;   // Delta^max * tau_c >= 2
  double predicted_eta = 0.0; // resonant transfer efficiency
};

// Adiabatic-criteria check for an AllenEberly pulse against comb bandwidth
// Gamma. Throws ModelError for Pi pulses.
AdiabaticityReport adiabaticity_report(const ControlPulse& pulse, double gamma_band);

// eta = 1 - exp(pi*Dmax*tau_c*(sqrt(1-(omega/Dmax)^2) - 1)); 1 when
// omega_max >= chirp_span.
double predicted_eta_chirped(double omega_max, double chirp_span, double tau_c);

// Peak Rabi frequency needed for resonant transfer efficiency eta with an
// AllenEberly pulse of the given chirp span and duration.
double required_rabi_chirped(double eta, double chirp_span, double tau_c);

// Peak Rabi frequency for a sech pi-pulse to reach efficiency eta across a
// band Gamma: (pi/4) * Gamma / arcsech(sqrt(eta)).
double required_rabi_pi(double eta, double gamma_band);

// Design procedure: chirp span = Gamma/2, then the minimal tau_c >= 4/Gamma
// reaching eta_target at omega_available, gate t_cut = 7*tau_c.
// max_tau_c > 0 bounds the search (storage-window limit); 0 means unbounded.
ControlPulse design_chirped_pulse(double gamma_band, double eta_target,
                                  double omega_available, double max_tau_c = 0.0);

// Train of Gaussian temporal modes, sigma_t = mode_duration/6, centers spaced
// by mode_duration, unit peak amplitude per mode before scaling.
struct SignalTrainSpec {
  int mode_count = 1;
  double mode_duration = 0.0;  // s
  std::vector<cplx> mode_amplitudes;  // empty = all 1
  double carrier_detuning = 0.0;      // rad/s from comb center

  double sigma_t() const { return mode_duration / 6.0; }
  void validate() const;
};

std::vector<cplx> build_signal_train(const SignalTrainSpec& spec,
                                     const TimeGrid& grid,
                                     double first_mode_center);

// CSV: t_s,omega_rad_s,detuning_rad_s sampled across the gate.
void write_pulse_csv(std::ostream& os, const ControlPulse& pulse, int samples);

}  // namespace afc
