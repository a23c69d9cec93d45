#include "afc/pulse.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>

#include "afc/csv.hpp"
#include "afc/errors.hpp"

namespace afc {

void ControlPulse::validate() const {
  if (!(omega_max >= 0.0) || !std::isfinite(omega_max))
    throw ModelError("pulse: omega_max must be finite and >= 0");
  if (!(tau_c > 0.0)) throw ModelError("pulse: tau_c must be positive");
  if (!(t_cut > 0.0)) throw ModelError("pulse: t_cut must be positive");
  if (kind == PulseKind::Pi && chirp_span != 0.0)
    throw ModelError("pulse: pi pulses carry no chirp");
  if (chirp_span < 0.0) throw ModelError("pulse: negative chirp span");
}

bool ControlPulse::same_shape(const ControlPulse& o) const {
  return kind == o.kind && omega_max == o.omega_max && tau_c == o.tau_c &&
         chirp_span == o.chirp_span && t_cut == o.t_cut;
}

double rabi_envelope(const ControlPulse& pulse, double t) {
  const double s = t - pulse.center_time;
  if (std::abs(s) > 0.5 * pulse.t_cut) return 0.0;
  return pulse.omega_max * sech(s / pulse.tau_c);
}

double instantaneous_detuning(const ControlPulse& pulse, double atom_detuning,
                              double t) {
  if (pulse.kind == PulseKind::Pi) return atom_detuning;
  const double s = t - pulse.center_time;
  return pulse.chirp_span * std::tanh(s / pulse.tau_c) + atom_detuning;
}

double pulse_area(const ControlPulse& pulse) {
  pulse.validate();
  if (pulse.omega_max == 0.0) return 0.0;
  const double half = 0.5 * pulse.t_cut / pulse.tau_c;
  auto f = [](double x) { return sech(x); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, -half, half, 10, 1e-12);
  return pulse.omega_max * pulse.tau_c * integral;
}

double predicted_eta_chirped(double omega_max, double chirp_span, double tau_c) {
  if (omega_max <= 0.0) return 0.0;
  if (omega_max >= chirp_span) return 1.0;
  const double x = omega_max / chirp_span;
  return 1.0 - std::exp(pi * chirp_span * tau_c * (std::sqrt(1.0 - x * x) - 1.0));
}

AdiabaticityReport adiabaticity_report(const ControlPulse& pulse, double gamma_band) {
  if (pulse.kind != PulseKind::AllenEberly)
    throw ModelError("adiabaticity report: only defined for Allen-Eberly pulses");
  pulse.validate();
  AdiabaticityReport rep;
  rep.covers_band = 2.0 * pulse.chirp_span >= gamma_band;
  rep.duration_ok = pulse.chirp_span * pulse.tau_c >= 2.0;
  rep.predicted_eta = predicted_eta_chirped(pulse.omega_max, pulse.chirp_span,
                                            pulse.tau_c);
  return rep;
}

double required_rabi_chirped(double eta, double chirp_span, double tau_c) {
  if (eta < 0.0 || eta >= 1.0)
    throw ModelError("required rabi (chirped): eta must lie in [0, 1)");
  if (!(chirp_span > 0.0) || !(tau_c > 0.0))
    throw ModelError("required rabi (chirped): need positive chirp span and tau_c");
  const double inner = std::log(1.0 - eta) / (pi * chirp_span * tau_c) + 1.0;
  if (inner < -1.0)
    throw ModelError("required rabi (chirped): pulse too short for this eta");
  return chirp_span * std::sqrt(1.0 - inner * inner);
}

double required_rabi_pi(double eta, double gamma_band) {
  if (!(eta > 0.0)) throw ModelError("required rabi (pi): eta must be > 0");
  if (eta >= 1.0) throw ModelError("required rabi (pi): eta = 1 is unreachable");
  return 0.25 * pi * gamma_band / arcsech(std::sqrt(eta));
}

ControlPulse design_chirped_pulse(double gamma_band, double eta_target,
                                  double omega_available, double max_tau_c) {
  if (!(eta_target > 0.0) || eta_target >= 1.0)
    throw ModelError("pulse design: eta target must lie in (0, 1)");
  if (!(omega_available > 0.0))
    throw ModelError("pulse design: need a positive available Rabi frequency");
  const double chirp = 0.5 * gamma_band;  // step (i): 2*Delta^max = Gamma
  const double tau_min = 4.0 / gamma_band;

  auto eta_at = [&](double tau) {
    return predicted_eta_chirped(omega_available, chirp, tau);
  };

  double tau = tau_min;
  if (eta_at(tau_min) < eta_target) {
    // monotone in tau_c: bracket then bisect
    double lo = tau_min;
    double hi = max_tau_c > 0.0 ? max_tau_c : tau_min;
    if (max_tau_c > 0.0) {
      if (eta_at(hi) < eta_target)
        throw ModelError("pulse design: eta target unreachable within the storage window");
    } else {
      while (eta_at(hi) < eta_target) {
        hi *= 2.0;
        if (hi > 1e12 * tau_min)
          throw ModelError("pulse design: eta target unreachable");
      }
      lo = hi / 2.0;
    }
    while ((hi - lo) / hi > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (eta_at(mid) < eta_target ? lo : hi) = mid;
    }
    tau = hi;
  }

  ControlPulse pulse;
  pulse.kind = PulseKind::AllenEberly;
  pulse.omega_max = omega_available;
  pulse.tau_c = tau;
  pulse.chirp_span = chirp;
  pulse.t_cut = 7.0 * tau;
  return pulse;
}

void SignalTrainSpec::validate() const {
  if (mode_count < 1) throw ModelError("signal: need at least one mode");
  if (!(mode_duration > 0.0))
    throw ModelError("signal: mode duration must be positive");
  if (!mode_amplitudes.empty() &&
      mode_amplitudes.size() != static_cast<std::size_t>(mode_count))
    throw ModelError("signal: amplitude list does not match mode count");
}

std::vector<cplx> build_signal_train(const SignalTrainSpec& spec,
                                     const TimeGrid& grid,
                                     double first_mode_center) {
  spec.validate();
  grid.validate();
  const double sig = spec.sigma_t();
  const double last_center = first_mode_center + (spec.mode_count - 1) * spec.mode_duration;
  if (first_mode_center - 3.0 * sig < grid.start ||
      last_center + 3.0 * sig > grid.stop)
    throw ModelError("signal: modes extend beyond the time grid");

  std::vector<cplx> train(grid.count, cplx(0.0, 0.0));
  for (int m = 0; m < spec.mode_count; ++m) {
    const cplx amp = spec.mode_amplitudes.empty() ? cplx(1.0, 0.0)
                                                  : spec.mode_amplitudes[m];
    if (amp == cplx(0.0, 0.0)) continue;
    const double tc = first_mode_center + m * spec.mode_duration;
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double dt = grid.time(i) - tc;
      if (std::abs(dt) > 8.0 * sig) continue;
      train[i] += amp * std::exp(-dt * dt / (2.0 * sig * sig));
    }
  }
  if (spec.carrier_detuning != 0.0) {
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double t = grid.time(i) - first_mode_center;
      train[i] *= std::exp(cplx(0.0, -spec.carrier_detuning * t));
    }
  }
  return train;
}

void write_pulse_csv(std::ostream& os, const ControlPulse& pulse, int samples) {
  os << "t_s,omega_rad_s,detuning_rad_s\n";
  for (int i = 0; i < samples; ++i) {
    const double t = pulse.gate_begin() +
                     pulse.t_cut * static_cast<double>(i) / (samples - 1);
    os << fmt_double(t) << ',' << fmt_double(rabi_envelope(pulse, t)) << ','
       << fmt_double(instantaneous_detuning(pulse, 0.0, t)) << '\n';
  }
}

}  // namespace afc
