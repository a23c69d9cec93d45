#include "afc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "afc/csv.hpp"
#include "afc/errors.hpp"

#ifndef AFC_SCENARIO_DATA_DIR
#define AFC_SCENARIO_DATA_DIR ""
#endif

namespace afc {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, Section> parse_ini(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (current.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    sections[current][key] = Entry{trim(line.substr(eq + 1)), line_no};
  }
  return sections;
}

double parse_number(const Entry& e, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError("line " + std::to_string(e.line) + ": key '" + key +
                      "' is not a number: '" + e.value + "'");
  return v;
}

std::vector<double> parse_number_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw ConfigError("line " + std::to_string(e.line) + ": key '" + key +
                        "' has a non-numeric entry: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(std::map<std::string, Section>& all, const std::string& name)
      : name_(name) {
    auto it = all.find(name);
    sec_ = it == all.end() ? nullptr : &it->second;
  }

  bool present() const { return sec_ != nullptr; }

  std::optional<double> number(const std::string& key) {
    Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    return parse_number(*e, key);
  }
  double required(const std::string& key) {
    auto v = number(key);
    if (!v)
      throw ConfigError("missing required key '" + key + "' in [" + name_ + "]");
    return *v;
  }
  std::optional<std::string> text(const std::string& key) {
    Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }
  std::vector<double> list(const std::string& key) {
    Entry* e = find(key);
    if (e == nullptr) return {};
    return parse_number_list(*e, key);
  }

 private:
  Entry* find(const std::string& key) {
    if (sec_ == nullptr) return nullptr;
    auto it = sec_->find(key);
    return it == sec_->end() ? nullptr : &it->second;
  }
  Section* sec_;
  std::string name_;
};

double positive(double v, const std::string& key) {
  if (!(v > 0.0))
    throw ConfigError("key '" + key + "' must be positive (unit violation)");
  return v;
}

}  // namespace

namespace {

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"comb", {"gamma_hz", "delta_hz", "peak_count", "depth_per_peak"}},
      {"signal",
       {"mode_count", "mode_duration_s", "carrier_detuning_hz", "amplitudes"}},
      {"control",
       {"family", "omega_max_hz", "tau_c_s", "chirp_span_hz",
        "chirp_tau_product", "t_cut_s", "t_cut_factor", "design_eta_target",
        "sweep_tau_products", "sweep_t_cuts_s", "eta_echo_assumed",
        "eta_tot_target"}},
      {"timeline", {"t0_signal_s", "t_control1_s", "t_s_s"}},
      {"grid", {"sample_count", "dt_s"}},
      {"output", {"dir"}}};
  return table;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  auto sections = parse_ini(text);
  // unknown sections and keys are rejected before any value is read
  for (const auto& [name, sec] : sections) {
    const auto it = known_keys().find(name);
    if (it == known_keys().end())
      throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, entry] : sec) {
      const auto& allowed = it->second;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ConfigError("line " + std::to_string(entry.line) +
                          ": unknown key '" + key + "' in [" + name + "]");
    }
  }

  Scenario sc;
  {
    SectionReader comb(sections, "comb");
    if (!comb.present()) throw ConfigError("missing required section [comb]");
    sc.comb.peak_width_fwhm = hz_to_rad(positive(comb.required("gamma_hz"), "gamma_hz"));
    sc.comb.peak_spacing = hz_to_rad(positive(comb.required("delta_hz"), "delta_hz"));
    sc.comb.peak_count = static_cast<int>(comb.required("peak_count"));
    sc.comb.depth_per_peak = comb.required("depth_per_peak");
    sc.comb.validate();
  }
  {
    SectionReader sig(sections, "signal");
    sc.signal.mode_count = static_cast<int>(sig.number("mode_count").value_or(1.0));
    if (auto v = sig.number("mode_duration_s"))
      sc.signal.mode_duration = positive(*v, "mode_duration_s");
    if (auto v = sig.number("carrier_detuning_hz"))
      sc.signal.carrier_detuning = hz_to_rad(*v);
    for (double a : sig.list("amplitudes"))
      sc.signal.mode_amplitudes.emplace_back(a, 0.0);
  }
  {
    SectionReader ctl(sections, "control");
    if (ctl.present()) {
      if (auto fam = ctl.text("family")) {
        if (*fam == "pi")
          sc.control.family = PulseKind::Pi;
        else if (*fam == "allen_eberly")
          sc.control.family = PulseKind::AllenEberly;
        else
          throw ConfigError("key 'family' must be 'pi' or 'allen_eberly', got '" +
                            *fam + "'");
      }
      if (auto v = ctl.number("omega_max_hz"))
        sc.control.omega_max = hz_to_rad(positive(*v, "omega_max_hz"));
      if (auto v = ctl.number("tau_c_s")) sc.control.tau_c = positive(*v, "tau_c_s");
      if (auto v = ctl.number("chirp_span_hz"))
        sc.control.chirp_span = hz_to_rad(positive(*v, "chirp_span_hz"));
      if (auto v = ctl.number("chirp_tau_product"))
        sc.control.chirp_tau_product = positive(*v, "chirp_tau_product");
      if (auto v = ctl.number("t_cut_s")) sc.control.t_cut = positive(*v, "t_cut_s");
      sc.control.t_cut_factor = ctl.number("t_cut_factor").value_or(7.0);
      if (auto v = ctl.number("design_eta_target"))
        sc.control.design_eta_target = *v;
      sc.control.sweep_tau_products = ctl.list("sweep_tau_products");
      sc.control.sweep_t_cuts = ctl.list("sweep_t_cuts_s");
      if (!sc.control.sweep_t_cuts.empty() &&
          sc.control.sweep_t_cuts.size() != sc.control.sweep_tau_products.size())
        throw ConfigError("key 'sweep_t_cuts_s' must match 'sweep_tau_products' "
                          "in length");
      sc.control.eta_echo_assumed = ctl.number("eta_echo_assumed").value_or(1.0);
      if (auto v = ctl.number("eta_tot_target")) sc.control.eta_tot_target = *v;
    }
  }
  {
    SectionReader tl(sections, "timeline");
    if (auto v = tl.number("t0_signal_s")) sc.t0_signal = *v;
    if (auto v = tl.number("t_control1_s")) sc.t_control1 = *v;
    if (auto v = tl.number("t_s_s")) sc.t_s = positive(*v, "t_s_s");
  }
  {
    SectionReader grid(sections, "grid");
    if (auto v = grid.number("sample_count")) {
      const auto n = static_cast<std::size_t>(*v);
      if (!is_power_of_two(n))
        throw ConfigError("key 'sample_count' must be a power of two");
      sc.grid_count = n;
    }
    if (auto v = grid.number("dt_s")) sc.grid_dt = positive(*v, "dt_s");
  }
  {
    SectionReader out(sections, "output");
    if (auto v = out.text("dir")) sc.output_dir = *v;
  }
  return sc;
}

std::string resolve_scenario_file(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return name_or_path;
  std::vector<std::string> roots;
  if (const char* env = std::getenv("AFC_SCENARIO_DIR")) roots.push_back(env);
  roots.push_back("scenarios");
  if (std::string(AFC_SCENARIO_DATA_DIR).size() > 0)
    roots.push_back(AFC_SCENARIO_DATA_DIR);
  for (const auto& root : roots) {
    const fs::path p = fs::path(root) / (name_or_path + ".ini");
    if (fs::exists(p)) return p.string();
  }
  throw ConfigError("scenario '" + name_or_path + "' not found (looked for a file "
                    "and for <name>.ini under AFC_SCENARIO_DIR, ./scenarios and "
                    "the installed data directory)");
}

Scenario load_scenario(const std::string& name_or_path) {
  const std::string path = resolve_scenario_file(name_or_path);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

// Explicit pulse from [control]; throws when the section cannot describe one.
ControlPulse resolve_control(const Scenario& sc, const CombSpec& comb,
                             double mode_duration) {
  const ControlConfig& c = sc.control;
  const double gamma_band = comb.bandwidth();

  if (c.design_eta_target || c.eta_tot_target) {
    double eta = 0.0;
    if (c.design_eta_target) {
      eta = *c.design_eta_target;
    } else {
      if (c.eta_echo_assumed <= 0.0)
        throw ConfigError("eta_tot_target needs a positive eta_echo_assumed");
      eta = std::sqrt(*c.eta_tot_target / c.eta_echo_assumed);
    }
    if (!c.omega_max)
      throw ConfigError("missing required key 'omega_max_hz' in [control] "
                        "(design request needs the available Rabi frequency)");
    const double max_tau = (comb.echo_time() - mode_duration) / 7.0;
    return design_chirped_pulse(gamma_band, eta, *c.omega_max, max_tau);
  }

  if (!c.family)
    throw ConfigError("missing required key 'family' in [control]");
  if (!c.omega_max)
    throw ConfigError("missing required key 'omega_max_hz' in [control]");

  ControlPulse p;
  p.kind = *c.family;
  p.omega_max = *c.omega_max;
  if (p.kind == PulseKind::Pi) {
    if (c.chirp_span || c.chirp_tau_product)
      throw ConfigError("pi pulses carry no chirp keys");
    p.tau_c = c.tau_c.value_or(1.0 / p.omega_max);  // ungated sech area pi
    p.chirp_span = 0.0;
  } else {
    p.chirp_span = c.chirp_span.value_or(0.5 * gamma_band);
    if (c.tau_c)
      p.tau_c = *c.tau_c;
    else if (c.chirp_tau_product)
      p.tau_c = *c.chirp_tau_product / p.chirp_span;
    else
      throw ConfigError("missing key in [control]: allen_eberly needs 'tau_c_s' "
                        "or 'chirp_tau_product'");
  }
  p.t_cut = c.t_cut.value_or(c.t_cut_factor * p.tau_c);
  p.validate();
  return p;
}

std::size_t next_pow2(double x) {
  std::size_t n = 1;
  while (static_cast<double>(n) < x) n <<= 1;
  return n;
}

std::string describe_effective(const Scenario& sc, const CombSpec& comb,
                               const SignalTrainSpec& signal,
                               const TimeGrid& grid,
                               const ControlPulse* pulse,
                               const ProtocolTimeline* tl) {
  std::ostringstream os;
  os << "[comb]\n"
     << "gamma_hz = " << fmt_double(rad_to_hz(comb.peak_width_fwhm)) << '\n'
     << "delta_hz = " << fmt_double(rad_to_hz(comb.peak_spacing)) << '\n'
     << "peak_count = " << comb.peak_count << '\n'
     << "depth_per_peak = " << fmt_double(comb.depth_per_peak) << '\n'
     << "derived_bandwidth_hz = " << fmt_double(rad_to_hz(comb.bandwidth())) << '\n'
     << "derived_finesse = " << fmt_double(comb_finesse(comb)) << '\n'
     << "derived_echo_time_s = " << fmt_double(comb.echo_time()) << '\n'
     << "[signal]\n"
     << "mode_count = " << signal.mode_count << '\n'
     << "mode_duration_s = " << fmt_double(signal.mode_duration) << '\n'
     << "mode_sigma_t_s = " << fmt_double(signal.sigma_t()) << '\n'
     << "carrier_detuning_hz = " << fmt_double(rad_to_hz(signal.carrier_detuning))
     << '\n';
  if (signal.carrier_detuning != 0.0) {
    const double edge = std::abs(signal.carrier_detuning) + 3.0 / signal.mode_duration;
    if (edge > 0.5 * comb.bandwidth())
      os << "warning = shifted signal spectrum leaves the comb band\n";
  }
  if (pulse != nullptr) {
    os << "[control]\n"
       << "family = " << (pulse->kind == PulseKind::Pi ? "pi" : "allen_eberly") << '\n'
       << "omega_max_hz = " << fmt_double(rad_to_hz(pulse->omega_max)) << '\n'
       << "tau_c_s = " << fmt_double(pulse->tau_c) << '\n'
       << "chirp_span_hz = " << fmt_double(rad_to_hz(pulse->chirp_span)) << '\n'
       << "t_cut_s = " << fmt_double(pulse->t_cut) << '\n';
  }
  if (tl != nullptr) {
    os << "[timeline]\n"
       << "t0_signal_s = " << fmt_double(tl->t0_signal) << '\n'
       << "t_control1_s = " << fmt_double(tl->t_control1) << '\n'
       << "t_s_s = " << fmt_double(tl->separation()) << '\n';
  }
  os << "[grid]\n"
     << "sample_count = " << grid.count << '\n'
     << "dt_s = " << fmt_double(grid.dt()) << '\n'
     << "[output]\n"
     << "dir = " << sc.output_dir << '\n';
  return os.str();
}

}  // namespace

ResolvedScenario resolve_scenario(const Scenario& sc, double extra_end_time) {
  ResolvedScenario rs;
  rs.comb = sc.comb;
  rs.comb.validate();
  rs.signal = sc.signal;
  if (rs.signal.mode_duration == 0.0)
    rs.signal.mode_duration = rs.comb.mode_duration();
  rs.signal.validate();
  const double tau = rs.signal.mode_duration;

  const bool has_control = sc.control.family.has_value() ||
                           sc.control.design_eta_target.has_value() ||
                           sc.control.eta_tot_target.has_value();
  double t_cut = 0.0, t_s = 0.0;
  if (has_control) {
    rs.pulse = resolve_control(sc, rs.comb, tau);
    t_cut = rs.pulse.t_cut;
    t_s = sc.t_s.value_or(t_cut + 2.5 * tau);
  }

  rs.t0 = sc.t0_signal.value_or(tau);

  const double train_span = (rs.signal.mode_count - 1) * tau;
  const double end_need = rs.t0 + rs.comb.echo_time() + t_s + train_span +
                          3.0 * tau + extra_end_time;
  const double dt = sc.grid_dt.value_or(two_pi / (2.5 * rs.comb.bandwidth()));
  const double t_need = std::max(16.0 * pi / rs.comb.peak_width_fwhm, end_need);
  const std::size_t count = sc.grid_count.value_or(next_pow2(t_need / dt));
  if (count > (1u << 20))
    throw ModelError("grid: sample count beyond desk scale (2^20)");
  rs.grid = TimeGrid{0.0, dt * static_cast<double>(count), count};
  rs.grid.validate();

  rs.profile = build_depth_profile(rs.comb, rs.grid.dual());

  if (has_control) {
    if (sc.t_control1) {
      rs.timeline.t0_signal = rs.t0;
      rs.timeline.t_control1 = *sc.t_control1;
      rs.timeline.t_control2 = *sc.t_control1 + t_s;
    } else {
      rs.timeline = make_auto_timeline(rs.comb, rs.signal, rs.t0, t_cut, t_s);
    }
    rs.pulse.center_time = rs.timeline.t_control1;
  }

  rs.effective_config = describe_effective(sc, rs.comb, rs.signal, rs.grid,
                                           has_control ? &rs.pulse : nullptr,
                                           has_control ? &rs.timeline : nullptr);
  rs.config_hash = fnv1a64(rs.effective_config);
  return rs;
}

namespace {

std::ofstream open_output(const RunOptions& opts, const Scenario& sc,
                          const ResolvedScenario& rs, const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = opts.out_dir.empty() ? fs::path(sc.output_dir)
                                            : fs::path(opts.out_dir);
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw ConfigError("cannot write output file: " + (dir / name).string());
  write_csv_preamble(os, rs.config_hash, rs.effective_config);
  return os;
}

void write_envelope_csv(std::ostream& os, const TimeGrid& grid,
                        const std::vector<cplx>& field) {
  os << "t_s,re_E,im_E\n";
  for (std::size_t i = 0; i < grid.count; ++i)
    os << fmt_double(grid.time(i)) << ',' << fmt_double(field[i].real()) << ','
       << fmt_double(field[i].imag()) << '\n';
}

const char* storage_header() {
  return "omega_rad_s,eta_echo,eta_sq,eta_tot,overlap,echo_time_s,leakage,"
         "capacity_int";
}

void write_storage_row(std::ostream& os, double omega, const StorageResult& r) {
  os << fmt_double(omega) << ',' << fmt_double(r.eta_echo) << ','
     << fmt_double(r.eta_sq) << ',' << fmt_double(r.eta_tot) << ','
     << fmt_double(r.overlap) << ',' << fmt_double(r.echo_time_measured) << ','
     << fmt_double(r.leakage) << ',' << r.capacity_int;
}

}  // namespace

EchoResult cmd_echo(const Scenario& sc, const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  const auto train = build_signal_train(rs.signal, rs.grid, rs.t0);
  const EchoResult res = absorb_and_echo(rs.profile, train, rs.grid, rs.signal,
                                         rs.t0, rs.comb);
  auto env = open_output(opts, sc, rs, "echo_envelope.csv");
  write_envelope_csv(env, rs.grid, res.output);
  auto sum = open_output(opts, sc, rs, "echo_summary.csv");
  sum << "eta_echo,echo_time_s\n"
      << fmt_double(res.eta_echo) << ',' << fmt_double(res.echo_time_measured)
      << '\n';
  return res;
}

StorageResult cmd_store(const Scenario& sc, const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  const auto train = build_signal_train(rs.signal, rs.grid, rs.t0);
  ProtocolOptions popts;
  popts.tol = opts.tol;
  popts.decimate = opts.decimate;
  popts.threads = opts.threads;
  const StorageResult res = run_protocol(rs.profile, train, rs.signal, rs.comb,
                                         rs.pulse, rs.pulse, rs.timeline,
                                         rs.grid, popts);
  auto os = open_output(opts, sc, rs, "store_result.csv");
  os << storage_header() << '\n';
  write_storage_row(os, rs.pulse.omega_max, res);
  os << '\n';
  auto env = open_output(opts, sc, rs, "store_envelope.csv");
  write_envelope_csv(env, rs.grid, res.recalled);
  return res;
}

std::vector<SweepFamilyResult> cmd_sweep(const Scenario& sc, double omega_min,
                                         double omega_max, int points,
                                         const std::vector<std::string>& families,
                                         const RunOptions& opts) {
  if (!(omega_max >= omega_min) || !(omega_min > 0.0) || points < 2)
    throw ConfigError("sweep: need 0 < omega_min <= omega_max and >= 2 points");

  std::vector<double> omegas(points);
  const double ratio = std::pow(omega_max / omega_min,
                                1.0 / static_cast<double>(points - 1));
  for (int i = 0; i < points; ++i)
    omegas[i] = omega_min * std::pow(ratio, static_cast<double>(i));

  // family list -> sweep setups
  std::vector<SweepFamilyResult> out;
  const double gamma_band = sc.comb.bandwidth();
  for (const auto& fam : families) {
    if (fam == "pi") {
      SweepFamilyResult f;
      f.name = "pi";
      f.setup.family = SweepFamily::Pi;
      f.setup.t_cut_factor = sc.control.t_cut_factor;
      out.push_back(std::move(f));
    } else if (fam == "chirped") {
      std::vector<double> products = sc.control.sweep_tau_products;
      if (products.empty() && sc.control.chirp_tau_product)
        products.push_back(*sc.control.chirp_tau_product);
      if (products.empty())
        throw ConfigError("sweep: chirped family needs 'chirp_tau_product' or "
                          "'sweep_tau_products' in [control]");
      int idx = 0;
      for (const double prod : products) {
        SweepFamilyResult f;
        f.name = "chirped_" + std::to_string(++idx);
        f.setup.family = SweepFamily::Chirped;
        f.setup.chirp_span = sc.control.chirp_span.value_or(0.5 * gamma_band);
        f.setup.tau_c = prod / f.setup.chirp_span;
        f.setup.t_cut_factor = sc.control.t_cut_factor;
        if (sc.control.sweep_t_cuts.size() == products.size())
          f.setup.t_cut = sc.control.sweep_t_cuts[idx - 1];
        out.push_back(std::move(f));
      }
    } else {
      throw ConfigError("sweep: unknown family '" + fam + "' (use pi, chirped)");
    }
  }

  // one grid covering the largest gate and delay in the sweep
  double max_tcut = 0.0;
  for (const auto& f : out) {
    const double tc =
        f.setup.family == SweepFamily::Pi
            ? f.setup.t_cut_factor / omega_min
            : f.setup.t_cut.value_or(f.setup.t_cut_factor * f.setup.tau_c);
    max_tcut = std::max(max_tcut, tc);
  }
  const ResolvedScenario rs = resolve_scenario(sc, 2.0 * max_tcut + 3.0 *
                                               sc.comb.mode_duration());
  ProtocolOptions popts;
  popts.tol = opts.tol;
  popts.decimate = opts.decimate;
  popts.threads = opts.threads;

  for (auto& f : out) {
    f.setup.t_s = sc.t_s;
    f.rows = sweep_rabi(rs.profile, rs.signal, rs.comb, rs.grid, rs.t0, f.setup,
                        omegas, popts);
    auto os = open_output(opts, sc, rs, "sweep_" + f.name + ".csv");
    if (f.setup.family == SweepFamily::Chirped)
      os << "# chirp_tau_product: "
         << fmt_double(f.setup.chirp_span * f.setup.tau_c) << '\n';
    os << storage_header() << ",predicted_eta_sq,error\n";
    for (const auto& row : f.rows) {
      write_storage_row(os, row.omega_max, row.result);
      os << ',' << fmt_double(row.predicted_eta_sq) << ',' << row.error << '\n';
    }
  }

  auto cmp = open_output(opts, sc, rs, "sweep_combined.csv");
  cmp << "omega_rad_s";
  for (const auto& f : out) cmp << ",eta_sq_" << f.name << ",predicted_" << f.name;
  cmp << '\n';
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    cmp << fmt_double(omegas[i]);
    for (const auto& f : out)
      cmp << ',' << fmt_double(f.rows[i].result.eta_sq) << ','
          << fmt_double(f.rows[i].predicted_eta_sq);
    cmp << '\n';
  }
  return out;
}

std::vector<CapacityRow> cmd_capacity(const Scenario& sc,
                                      const std::vector<double>& omegas,
                                      const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  double eta_target = 0.0;
  if (sc.control.design_eta_target) {
    eta_target = *sc.control.design_eta_target;
  } else if (sc.control.eta_tot_target) {
    eta_target = std::sqrt(*sc.control.eta_tot_target / sc.control.eta_echo_assumed);
  } else {
    throw ConfigError("capacity: scenario needs 'design_eta_target' or "
                      "'eta_tot_target' in [control]");
  }

  const double tau = rs.signal.mode_duration;
  const double max_tau_c = (rs.comb.echo_time() - tau) / 7.0;
  std::vector<CapacityRow> rows;
  for (const double omega : omegas) {
    CapacityRow row;
    row.omega_max = omega;
    try {
      const ControlPulse p =
          design_chirped_pulse(rs.comb.bandwidth(), eta_target, omega, max_tau_c);
      row.tau_c = p.tau_c;
      row.t_cut = p.t_cut;
      const Capacity cap = multimode_capacity(rs.comb, p.t_cut);
      row.capacity_real = cap.real;
      row.capacity_int = cap.integer;
      row.predicted_eta = predicted_eta_chirped(omega, p.chirp_span, p.tau_c);
      row.predicted_eta_tot =
          sc.control.eta_echo_assumed * row.predicted_eta * row.predicted_eta;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  auto os = open_output(opts, sc, rs, "capacity.csv");
  os << "omega_rad_s,tau_c_s,t_cut_s,capacity_real,capacity_int,predicted_eta,"
        "predicted_eta_tot,error\n";
  for (const auto& r : rows) {
    os << fmt_double(r.omega_max) << ',' << fmt_double(r.tau_c) << ','
       << fmt_double(r.t_cut) << ',' << fmt_double(r.capacity_real) << ','
       << r.capacity_int << ',' << fmt_double(r.predicted_eta) << ','
       << fmt_double(r.predicted_eta_tot) << ',' << r.error << '\n';
  }
  return rows;
}

ControlPulse cmd_design(const Scenario& sc, const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  auto os = open_output(opts, sc, rs, "design.csv");
  os << "omega_max_rad_s,tau_c_s,chirp_span_rad_s,t_cut_s,predicted_eta\n"
     << fmt_double(rs.pulse.omega_max) << ',' << fmt_double(rs.pulse.tau_c) << ','
     << fmt_double(rs.pulse.chirp_span) << ',' << fmt_double(rs.pulse.t_cut) << ','
     << fmt_double(predicted_eta_chirped(rs.pulse.omega_max, rs.pulse.chirp_span,
                                         rs.pulse.tau_c))
     << '\n';
  return rs.pulse;
}

void cmd_dump_comb(const Scenario& sc, const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  auto os = open_output(opts, sc, rs, "comb.csv");
  write_depth_csv(os, rs.profile);
}

void cmd_dump_pulse(const Scenario& sc, const RunOptions& opts) {
  const ResolvedScenario rs = resolve_scenario(sc);
  auto os = open_output(opts, sc, rs, "pulse.csv");
  write_pulse_csv(os, rs.pulse, 2001);
}

}  // namespace afc
