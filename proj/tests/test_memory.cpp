#include <doctest.h>

#include <cmath>

#include "afc/fft.hpp"
#include "afc/memory.hpp"

using namespace afc;

namespace {

struct PrSetup {
  CombSpec comb{hz_to_rad(25e3), hz_to_rad(100e3), 40, 4.0};
  TimeGrid grid{0.0, 4096e-7, 4096};  // dt 0.1 us, span covers 2.5*Gamma
  DepthProfile profile = build_depth_profile(comb, grid.dual());
  SignalTrainSpec signal;
  double t0 = 3e-6;

  PrSetup() {
    signal.mode_count = 1;
    signal.mode_duration = comb.mode_duration();  // 1.5 us
  }
  std::vector<cplx> train() const {
    return build_signal_train(signal, grid, t0);
  }
};

ControlPulse strong_pi(const CombSpec& comb) {
  return make_area_pi_pulse(10.0 * comb.bandwidth());
}

ControlPulse chirp_pulse(const CombSpec& comb, double x, double alpha) {
  ControlPulse p;
  p.kind = PulseKind::AllenEberly;
  p.chirp_span = 0.5 * comb.bandwidth();
  p.omega_max = x * p.chirp_span;
  p.tau_c = alpha / p.chirp_span;
  p.t_cut = 7.0 * p.tau_c;
  return p;
}

ProtocolOptions fast_opts() {
  ProtocolOptions o;
  o.threads = 4;
  return o;
}

}  // namespace

TEST_CASE("forward echo on the Pr comb") {
  PrSetup s;
  const auto res = absorb_and_echo(s.profile, s.train(), s.grid, s.signal,
                                   s.t0, s.comb);
  CHECK(res.eta_echo == doctest::Approx(0.25).epsilon(0.1));
  CHECK(res.echo_time_measured == doctest::Approx(10e-6).epsilon(0.01));
  // output never exceeds input energy
  double e_in = 0.0, e_out = 0.0;
  const auto train = s.train();
  for (std::size_t i = 0; i < s.grid.count; ++i) {
    e_in += std::norm(train[i]);
    e_out += std::norm(res.output[i]);
  }
  CHECK(e_out <= e_in * (1.0 + 1e-6));
}

TEST_CASE("empty comb is transparent") {
  PrSetup s;
  CombSpec empty = s.comb;
  empty.depth_per_peak = 0.0;
  const DepthProfile prof = build_depth_profile(empty, s.grid.dual());
  const auto train = s.train();
  const auto res = absorb_and_echo(prof, train, s.grid, s.signal, s.t0, empty);
  CHECK(res.eta_echo < 1e-8);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.grid.count; ++i)
    worst = std::max(worst, std::abs(res.output[i] - train[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("echo rejects short modes and overlapping windows") {
  PrSetup s;
  SignalTrainSpec bad = s.signal;
  bad.mode_duration = 1.0 / s.comb.bandwidth();  // bandwidth > Gamma
  CHECK_THROWS_AS(absorb_and_echo(s.profile, s.train(), s.grid, bad, s.t0, s.comb),
                  ModelError);

  // 7 modes of 1.5 us cannot precede a 10 us echo without ambiguity
  SignalTrainSpec seven = s.signal;
  seven.mode_count = 7;
  const auto train7 = build_signal_train(seven, s.grid, s.t0);
  CHECK_THROWS_AS(absorb_and_echo(s.profile, train7, s.grid, seven, s.t0, s.comb),
                  ModelError);

  SignalTrainSpec six = s.signal;
  six.mode_count = 6;
  const auto train6 = build_signal_train(six, s.grid, s.t0);
  CHECK_NOTHROW(absorb_and_echo(s.profile, train6, s.grid, six, s.t0, s.comb));
}

TEST_CASE("overlap fidelity") {
  PrSetup s;
  const auto train = s.train();
  Fft fft(s.grid.count);
  auto spec = fft.to_freq(train, s.grid.dt());
  const double delay = 12.3e-6;
  for (std::size_t m = 0; m < s.grid.count; ++m)
    spec[m] *= 0.3 * std::exp(cplx(0.0, fft_bin_omega(m, s.grid.count, s.grid.dt()) * delay));
  const auto shifted = fft.to_time(spec, s.grid.dt());
  // shifted and scaled copy: unit overlap at the refined delay
  CHECK(overlap_fidelity(train, shifted, s.grid, delay, 0.4e-6) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // also when the expectation is slightly off (refinement finds it)
  CHECK(overlap_fidelity(train, shifted, s.grid, delay + 0.2e-6, 0.4e-6) ==
        doctest::Approx(1.0).epsilon(1e-6));
  const std::vector<cplx> zero(s.grid.count, cplx(0.0, 0.0));
  CHECK_THROWS_AS(overlap_fidelity(train, zero, s.grid, delay, 1e-6), ModelError);
}

TEST_CASE("identity filter reproduces the bare echo") {
  PrSetup s;
  const ControlPulse p = strong_pi(s.comb);
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  ProtocolOptions opts = fast_opts();
  opts.force_identity_filter = true;
  const auto res = run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                                tl, s.grid, opts);
  // exact up to window-edge quantization of the grid (~1e-8 here)
  CHECK(res.eta_tot == doctest::Approx(res.eta_echo).epsilon(1e-7));
  CHECK(res.eta_sq == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("strong pi pair: near-unit transfer at the shifted echo time") {
  PrSetup s;
  const ControlPulse p = strong_pi(s.comb);
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  const auto res = run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                                tl, s.grid, fast_opts());
  CHECK(res.eta_sq > 0.98);
  CHECK(res.eta_tot <= res.eta_echo * (1.0 + 1e-6));
  const double expected = s.comb.echo_time() + tl.separation();
  CHECK(std::abs(res.echo_time_measured - expected) < s.signal.mode_duration / 10.0);
  CHECK(res.overlap > 0.99);
  CHECK(res.leakage < 0.01);
}

TEST_CASE("zero control field recalls nothing") {
  PrSetup s;
  ControlPulse p = strong_pi(s.comb);
  p.omega_max = 0.0;
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  const auto res = run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                                tl, s.grid, fast_opts());
  CHECK(res.eta_tot < 1e-10);
  CHECK(res.leakage == doctest::Approx(res.eta_echo).epsilon(1e-6));
}

TEST_CASE("chirped pair at the eta=0.95 design point") {
  PrSetup s;
  const ControlPulse p = chirp_pulse(s.comb, 0.3432, 15.7);
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  const auto res = run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                                tl, s.grid, fast_opts());
  CHECK(res.eta_sq == doctest::Approx(0.90).epsilon(0.045));
  CHECK(res.capacity_int == multimode_capacity(s.comb, p.t_cut).integer);
}

TEST_CASE("eta_sq equals the weighted mean of |t_double|^2") {
  PrSetup s;
  const ControlPulse p = chirp_pulse(s.comb, 0.3432, 15.7);
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  const auto res = run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                                tl, s.grid, fast_opts());

  // independent route: echo spectrum weights x transfer profile
  const auto train = s.train();
  const auto echo = absorb_and_echo(s.profile, train, s.grid, s.signal, s.t0, s.comb);
  std::vector<cplx> windowed(s.grid.count, cplx(0.0, 0.0));
  const double lo = s.t0 + s.comb.echo_time() - s.signal.mode_duration;
  const double hi = s.t0 + s.comb.echo_time() + s.signal.mode_duration;
  for (std::size_t i = 0; i < s.grid.count; ++i)
    if (s.grid.time(i) >= lo && s.grid.time(i) <= hi) windowed[i] = echo.output[i];
  Fft fft(s.grid.count);
  const auto spec = fft.to_freq(windowed, s.grid.dt());

  const double d_omega = s.grid.dual().spacing;
  const double band = 0.5 * s.comb.bandwidth() + 4.0 * s.comb.peak_spacing;
  const auto kb = static_cast<std::ptrdiff_t>(std::floor(band / d_omega));
  std::vector<double> dets;
  for (std::ptrdiff_t k = -kb; k <= kb; ++k) dets.push_back(k * d_omega);
  TransferOptions topt;
  topt.threads = 4;
  const TransferProfile prof = transfer_profile(p, p, dets, topt);
  double num = 0.0, den = 0.0;
  const std::size_t n = s.grid.count;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i) - kb;
    const std::size_t m = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(n)) % n);
    const double w = std::norm(spec[m]);
    num += w * std::norm(prof.t_double[i]);
    den += w;
  }
  CHECK(res.eta_sq == doctest::Approx(num / den).epsilon(0.01));
}

TEST_CASE("multimode linearity and per-mode independence") {
  PrSetup s;
  s.signal.mode_count = 2;
  const ControlPulse p = chirp_pulse(s.comb, 0.6, 2.0);
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);
  ProtocolOptions opts = fast_opts();

  SignalTrainSpec both = s.signal;
  both.mode_amplitudes = {cplx(1.0, 0.0), cplx(0.6, 0.3)};
  SignalTrainSpec only1 = s.signal;
  only1.mode_amplitudes = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
  SignalTrainSpec only2 = s.signal;
  only2.mode_amplitudes = {cplx(0.0, 0.0), cplx(0.6, 0.3)};

  const auto rb = run_protocol(s.profile, build_signal_train(both, s.grid, s.t0),
                               both, s.comb, p, p, tl, s.grid, opts);
  const auto r1 = run_protocol(s.profile, build_signal_train(only1, s.grid, s.t0),
                               only1, s.comb, p, p, tl, s.grid, opts);
  const auto r2 = run_protocol(s.profile, build_signal_train(only2, s.grid, s.t0),
                               only2, s.comb, p, p, tl, s.grid, opts);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < s.grid.count; ++i) {
    worst = std::max(worst,
                     std::abs(rb.recalled[i] - r1.recalled[i] - r2.recalled[i]));
    scale = std::max(scale, std::abs(rb.recalled[i]));
  }
  CHECK(worst < 1e-6 * scale);
}

TEST_CASE("timeline validation") {
  PrSetup s;
  const ControlPulse p = strong_pi(s.comb);
  ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, p.t_cut);

  ProtocolTimeline bad = tl;
  bad.t_control1 = s.t0;  // inside the train
  CHECK_THROWS_AS(run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                               bad, s.grid, fast_opts()),
                  ModelError);

  bad = tl;
  bad.t_control1 = s.t0 + s.comb.echo_time();  // past the echo time
  CHECK_THROWS_AS(run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                               bad, s.grid, fast_opts()),
                  ModelError);

  bad = tl;
  bad.t_control2 = bad.t_control1 + 0.5 * p.t_cut;  // gates overlap
  CHECK_THROWS_AS(run_protocol(s.profile, s.train(), s.signal, s.comb, p, p,
                               bad, s.grid, fast_opts()),
                  ModelError);

  // mismatched chirped pulses refused unless explicitly allowed
  const ControlPulse c1 = chirp_pulse(s.comb, 0.6, 2.0);
  ControlPulse c2 = c1;
  c2.omega_max *= 1.1;
  const ProtocolTimeline tlc = make_auto_timeline(s.comb, s.signal, s.t0, c1.t_cut);
  CHECK_THROWS_AS(run_protocol(s.profile, s.train(), s.signal, s.comb, c1, c2,
                               tlc, s.grid, fast_opts()),
                  ModelError);
  ProtocolOptions allow = fast_opts();
  allow.allow_mismatched_controls = true;
  CHECK_NOTHROW(run_protocol(s.profile, s.train(), s.signal, s.comb, c1, c2,
                             tlc, s.grid, allow));

  // a gate too long for the storage window cannot be auto-placed
  CHECK_THROWS_AS(make_auto_timeline(s.comb, s.signal, s.t0, s.comb.echo_time()),
                  ModelError);

  // offset bookkeeping: control delay plus T_0 spans the echo time
  CHECK(tl.offset_t0(s.comb.echo_time()) ==
        doctest::Approx(s.comb.echo_time() - (tl.t_control1 - s.t0)));
}

TEST_CASE("deliberately mismatched chirps degrade the recall") {
  // different sweep rates leave uncancelled dressed-state phase curvature
  PrSetup s;
  const ControlPulse c1 = chirp_pulse(s.comb, 0.8, 15.7);
  ControlPulse c2 = c1;
  c2.chirp_span = 2.0 * c1.chirp_span;
  const ProtocolTimeline tl = make_auto_timeline(s.comb, s.signal, s.t0, c1.t_cut);
  ProtocolOptions allow = fast_opts();
  allow.allow_mismatched_controls = true;
  const auto good = run_protocol(s.profile, s.train(), s.signal, s.comb, c1, c1,
                                 tl, s.grid, allow);
  const auto badr = run_protocol(s.profile, s.train(), s.signal, s.comb, c1, c2,
                                 tl, s.grid, allow);
  CHECK(badr.overlap < good.overlap);
  CHECK(good.overlap > 0.99);
}
