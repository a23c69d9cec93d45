#pragma once

#include <optional>
#include <string>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/grids.hpp"
#include "afc/pulse.hpp"

namespace afc {

// Placement of the control pulses relative to the signal train.
struct ProtocolTimeline {
  double t0_signal = 0.0;   // center of the first signal mode
  double t_control1 = 0.0;  // gate centers
  double t_control2 = 0.0;

  double separation() const { return t_control2 - t_control1; }  // T_s
  // Offset T_0 with 2pi/Delta - T_0 the control-to-signal delay.
  double offset_t0(double echo_time) const {
    return echo_time - (t_control1 - t0_signal);
  }
};

struct StorageResult {
  double eta_echo = 0.0;    // no-control echo efficiency
  double eta_sq = 0.0;      // eta_tot / eta_echo
  double eta_tot = 0.0;
  double overlap = 0.0;
  double echo_time_measured = 0.0;  // recall centroid minus input centroid
  int capacity_int = 0;
  double leakage = 0.0;     // first-echo energy left by incomplete transfer
  std::vector<cplx> recalled;       // recall-window field on the time grid
};

struct EchoResult {
  std::vector<cplx> output;
  double eta_echo = 0.0;
  double echo_time_measured = 0.0;
};

struct ProtocolOptions {
  double tol = 1e-9;
  bool decimate = true;
  int threads = 1;
  bool allow_mismatched_controls = false;  // negative tests, perturbations
  bool force_identity_filter = false;      // bypass pulses: t_double == 1
};

// Single-pass linear response: output = IFFT[exp(-d/2 + i phi) FFT[input]],
// echo efficiency measured in windows of half-width mode_duration around each
// mode's expected first-echo time.
EchoResult absorb_and_echo(const DepthProfile& profile,
                           const std::vector<cplx>& train,
                           const TimeGrid& grid, const SignalTrainSpec& signal,
                           double first_mode_center, const CombSpec& comb);

// Normalized delay-refined amplitude overlap squared; the refinement scans
// expected_delay +- search_halfwidth.
double overlap_fidelity(const std::vector<cplx>& input,
                        const std::vector<cplx>& output, const TimeGrid& grid,
                        double expected_delay, double search_halfwidth);

StorageResult run_protocol(const DepthProfile& profile,
                           const std::vector<cplx>& train,
                           const SignalTrainSpec& signal, const CombSpec& comb,
                           ControlPulse pulse1, ControlPulse pulse2,
                           const ProtocolTimeline& timeline,
                           const TimeGrid& grid, const ProtocolOptions& opts);

// One sweep row; error carries a message when the point failed.
struct SweepRow {
  double omega_max = 0.0;
  StorageResult result;
  double predicted_eta_sq = 0.0;  // from the family's analytic efficiency formula
  std::string error;
};

enum class SweepFamily { Pi, Chirped };

struct SweepSetup {
  SweepFamily family = SweepFamily::Pi;
  // Chirped family: fixed shape, omega scales. tau_c/chirp ignored for Pi,
  // where tau_c = 1/omega keeps the ungated area at pi.
  double tau_c = 0.0;
  double chirp_span = 0.0;
  double t_cut_factor = 7.0;
  std::optional<double> t_cut;  // absolute gate width; overrides the factor
  std::optional<double> t_s;    // control separation; default from t_cut
};

std::vector<SweepRow> sweep_rabi(const DepthProfile& profile,
                                 const SignalTrainSpec& signal,
                                 const CombSpec& comb, const TimeGrid& grid,
                                 double first_mode_center,
                                 const SweepSetup& setup,
                                 const std::vector<double>& omegas,
                                 const ProtocolOptions& opts);

// Feasible default timeline: gate 1 centered in the free interval between
// train end and the echo time, gate 2 delayed by t_s (default t_cut + margin).
ProtocolTimeline make_auto_timeline(const CombSpec& comb,
                                    const SignalTrainSpec& signal,
                                    double first_mode_center, double t_cut,
                                    std::optional<double> t_s = std::nullopt);

ControlPulse make_area_pi_pulse(double omega_max, double t_cut_factor = 7.0);

}  // namespace afc
