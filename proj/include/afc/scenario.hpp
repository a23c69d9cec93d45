#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afc/comb.hpp"
#include "afc/memory.hpp"
#include "afc/pulse.hpp"

namespace afc {

// Parsed [control] section: either an explicit pulse or a design request.
struct ControlConfig {
  std::optional<PulseKind> family;
  std::optional<double> omega_max;    // rad/s
  std::optional<double> tau_c;        // s
  std::optional<double> chirp_span;   // rad/s
  std::optional<double> chirp_tau_product;
  std::optional<double> t_cut;        // s
  double t_cut_factor = 7.0;
  std::optional<double> design_eta_target;
  std::vector<double> sweep_tau_products;
  std::vector<double> sweep_t_cuts;  // optional, parallel to sweep_tau_products
  double eta_echo_assumed = 1.0;      // capacity chains quote eta_tot = eta_echo*eta^2
  std::optional<double> eta_tot_target;
};

struct Scenario {
  CombSpec comb;
  SignalTrainSpec signal;              // mode_duration 0 = auto (12*pi/Gamma)
  ControlConfig control;
  std::optional<double> t0_signal;
  std::optional<double> t_control1;
  std::optional<double> t_s;
  std::optional<std::size_t> grid_count;
  std::optional<double> grid_dt;
  std::string output_dir = ".";

  std::string effective_config;        // echo block with every default resolved
  std::uint64_t config_hash = 0;
};

// Flat INI text; frequencies in Hz, times in seconds. Throws ConfigError
// naming the offending key and line.
Scenario parse_scenario(const std::string& text);

// Path, or a canned name resolved against AFC_SCENARIO_DIR, ./scenarios and
// the built-in data directory.
Scenario load_scenario(const std::string& name_or_path);
std::string resolve_scenario_file(const std::string& name_or_path);

struct RunOptions {
  double tol = 1e-9;
  bool decimate = true;
  int threads = 1;
  std::string out_dir;  // empty = scenario's [output] dir
};

// Scenario with grids, pulse and timeline made concrete.
struct ResolvedScenario {
  CombSpec comb;
  SignalTrainSpec signal;
  TimeGrid grid;
  DepthProfile profile;
  double t0 = 0.0;
  ControlPulse pulse;
  ProtocolTimeline timeline;
  std::uint64_t config_hash = 0;
  std::string effective_config;
};

// extra_end_time extends the grid (sweeps with larger gates / delays).
ResolvedScenario resolve_scenario(const Scenario& sc, double extra_end_time = 0.0);

struct CapacityRow {
  double omega_max = 0.0;
  double tau_c = 0.0;
  double t_cut = 0.0;
  double capacity_real = 0.0;
  int capacity_int = 0;
  double predicted_eta = 0.0;
  double predicted_eta_tot = 0.0;
  std::string error;
};

EchoResult cmd_echo(const Scenario& sc, const RunOptions& opts);
StorageResult cmd_store(const Scenario& sc, const RunOptions& opts);

struct SweepFamilyResult {
  std::string name;
  SweepSetup setup;
  std::vector<SweepRow> rows;
};
std::vector<SweepFamilyResult> cmd_sweep(const Scenario& sc, double omega_min,
                                         double omega_max, int points,
                                         const std::vector<std::string>& families,
                                         const RunOptions& opts);

std::vector<CapacityRow> cmd_capacity(const Scenario& sc,
                                      const std::vector<double>& omegas,
                                      const RunOptions& opts);

ControlPulse cmd_design(const Scenario& sc, const RunOptions& opts);
void cmd_dump_comb(const Scenario& sc, const RunOptions& opts);
void cmd_dump_pulse(const Scenario& sc, const RunOptions& opts);

}  // namespace afc
