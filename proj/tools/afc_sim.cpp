#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/scenario.hpp"
#include "afc/units.hpp"

namespace {

void print_storage(const afc::StorageResult& r) {
  std::printf("eta_echo      %.6f\n", r.eta_echo);
  std::printf("eta_sq        %.6f\n", r.eta_sq);
  std::printf("eta_tot       %.6f\n", r.eta_tot);
  std::printf("overlap       %.6f\n", r.overlap);
  std::printf("echo_time_s   %.6e\n", r.echo_time_measured);
  std::printf("leakage       %.6e\n", r.leakage);
  std::printf("capacity_int  %d\n", r.capacity_int);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level simulator of AFC optical memory with on-demand "
               "spin-wave storage"};
  app.require_subcommand(1);

  std::string scenario_name;
  std::string out_dir;
  double tol = 1e-9;
  bool no_decimation = false;
  int threads = 1;
  app.add_option("--scenario", scenario_name, "Scenario file or canned name")
      ->envname("AFC_SCENARIO")
      ->required();
  app.add_option("--out", out_dir, "Output directory (overrides [output] dir)")
      ->envname("AFC_OUT");
  app.add_option("--tol", tol, "ODE integrator tolerance")->envname("AFC_TOL");
  app.add_flag("--no-decimation", no_decimation,
               "Solve every detuning point exactly")
      ->envname("AFC_NO_DECIMATION");
  app.add_option("--threads", threads, "Worker threads for detuning sweeps")
      ->envname("AFC_THREADS");

  auto* echo = app.add_subcommand("echo", "Forward echo without control fields");
  auto* store = app.add_subcommand("store", "Full spin-wave storage protocol");

  auto* sweep = app.add_subcommand("sweep", "Transfer efficiency vs Rabi frequency");
  double omega_min_hz = 0.0, omega_max_hz = 0.0;
  int points = 9;
  std::vector<std::string> families{"pi", "chirped"};
  sweep->add_option("--omega-min-hz", omega_min_hz, "Lowest peak Rabi frequency (Hz)")
      ->required();
  sweep->add_option("--omega-max-hz", omega_max_hz, "Highest peak Rabi frequency (Hz)")
      ->required();
  sweep->add_option("--points", points, "Geometric grid size");
  sweep->add_option("--families", families, "pi and/or chirped");

  auto* capacity = app.add_subcommand("capacity",
                                      "Designed-pulse capacity per Rabi frequency");
  std::vector<double> omegas_hz;
  capacity->add_option("--omegas-hz", omegas_hz, "Rabi frequencies (Hz)")->required();

  auto* design = app.add_subcommand("design", "Chirped-pulse design report");
  auto* dump_comb = app.add_subcommand("dump-comb", "Depth/dispersion profile CSV");
  auto* dump_pulse = app.add_subcommand("dump-pulse", "Control pulse shape CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const afc::Scenario sc = afc::load_scenario(scenario_name);
    afc::RunOptions opts;
    opts.tol = tol;
    opts.decimate = !no_decimation;
    opts.threads = threads;
    opts.out_dir = out_dir;

    if (echo->parsed()) {
      const auto res = afc::cmd_echo(sc, opts);
      std::printf("eta_echo      %.6f\n", res.eta_echo);
      std::printf("echo_time_s   %.6e\n", res.echo_time_measured);
    } else if (store->parsed()) {
      print_storage(afc::cmd_store(sc, opts));
    } else if (sweep->parsed()) {
      const auto res = afc::cmd_sweep(sc, afc::hz_to_rad(omega_min_hz),
                                      afc::hz_to_rad(omega_max_hz), points,
                                      families, opts);
      for (const auto& fam : res) {
        std::printf("family %s\n", fam.name.c_str());
        for (const auto& row : fam.rows) {
          if (row.error.empty())
            std::printf("  omega %.4e Hz  eta_sq %.4f  overlap %.4f\n",
                        afc::rad_to_hz(row.omega_max), row.result.eta_sq,
                        row.result.overlap);
          else
            std::printf("  omega %.4e Hz  error: %s\n",
                        afc::rad_to_hz(row.omega_max), row.error.c_str());
        }
      }
    } else if (capacity->parsed()) {
      std::vector<double> omegas;
      omegas.reserve(omegas_hz.size());
      for (const double f : omegas_hz) omegas.push_back(afc::hz_to_rad(f));
      const auto rows = afc::cmd_capacity(sc, omegas, opts);
      for (const auto& r : rows) {
        if (r.error.empty())
          std::printf("omega %.4e Hz  tau_c %.4e s  t_cut %.4e s  capacity %d "
                      "(%.2f)  eta %.4f  eta_tot %.4f\n",
                      afc::rad_to_hz(r.omega_max), r.tau_c, r.t_cut,
                      r.capacity_int, r.capacity_real, r.predicted_eta,
                      r.predicted_eta_tot);
        else
          std::printf("omega %.4e Hz  unreachable: %s\n",
                      afc::rad_to_hz(r.omega_max), r.error.c_str());
      }
    } else if (design->parsed()) {
      const auto p = afc::cmd_design(sc, opts);
      std::printf("omega_max_hz  %.6e\n", afc::rad_to_hz(p.omega_max));
      std::printf("tau_c_s       %.6e\n", p.tau_c);
      std::printf("chirp_span_hz %.6e\n", afc::rad_to_hz(p.chirp_span));
      std::printf("t_cut_s       %.6e\n", p.t_cut);
    } else if (dump_comb->parsed()) {
      afc::cmd_dump_comb(sc, opts);
    } else if (dump_pulse->parsed()) {
      afc::cmd_dump_pulse(sc, opts);
    }
  } catch (const afc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
