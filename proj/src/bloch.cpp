#include "afc/bloch.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <ostream>

#include "afc/csv.hpp"
#include "afc/detail/interp.hpp"
#include "afc/detail/parallel.hpp"
#include "afc/errors.hpp"

namespace afc {

namespace odeint = boost::numeric::odeint;

double Propagator::unitarity_defect() const {
  // U^dag U - I, elementwise max magnitude
  const cplx a = std::conj(ss) * ss + std::conj(es) * es - 1.0;
  const cplx b = std::conj(ss) * se + std::conj(es) * ee;
  const cplx c = std::conj(se) * ss + std::conj(ee) * es;
  const cplx d = std::conj(se) * se + std::conj(ee) * ee - 1.0;
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

Propagator operator*(const Propagator& a, const Propagator& b) {
  return Propagator{a.ss * b.ss + a.se * b.es, a.ss * b.se + a.se * b.ee,
                    a.es * b.ss + a.ee * b.es, a.es * b.se + a.ee * b.ee};
}

Propagator propagate_numeric(const ControlPulse& pulse, double atom_detuning,
                             double tol) {
  pulse.validate();
  if (!std::isfinite(atom_detuning))
    throw ModelError("propagate: non-finite detuning");
  if (!(tol >= 1e-12 && tol <= 1e-4))
    throw ModelError("propagate: tol must lie in [1e-12, 1e-4]");

  // Both propagator columns at once, gate-local time. The coupling enters as
  // +Omega/2 so the resonant area-pi propagator comes out in the
  // (cos, -i sin) form; the sign is a control-phase convention and drops out
  // of every population and t_double.
  using State = std::array<cplx, 4>;
  const double om = pulse.omega_max;
  const double tau = pulse.tau_c;
  const double chirp = pulse.chirp_span;
  auto rhs = [om, tau, chirp, atom_detuning](const State& y, State& dy, double s) {
    const double half_rabi = 0.5 * om * sech(s / tau);
    const double det = (chirp == 0.0 ? atom_detuning
                                     : chirp * std::tanh(s / tau) + atom_detuning);
    const cplx mi(0.0, -1.0);
    dy[0] = mi * half_rabi * y[1];
    dy[1] = mi * half_rabi * y[0] + mi * det * y[1];
    dy[2] = mi * half_rabi * y[3];
    dy[3] = mi * half_rabi * y[2] + mi * det * y[3];
  };

  State y{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
  auto stepper = odeint::make_controlled(0.01 * tol, tol,
                                         odeint::runge_kutta_fehlberg78<State>());
  // segment the gate so no step exceeds tau_c/50 (keeps the chirp resolved)
  const double max_dt = tau / 50.0;
  const double t0 = -0.5 * pulse.t_cut;
  const double t1 = 0.5 * pulse.t_cut;
  const auto segments =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t1 - t0) / max_dt)));
  const double seg = (t1 - t0) / static_cast<double>(segments);
  for (std::size_t k = 0; k < segments; ++k) {
    const double a = t0 + static_cast<double>(k) * seg;
    odeint::integrate_adaptive(stepper, rhs, y, a, a + seg, 0.1 * seg);
  }
  return Propagator{y[0], y[2], y[1], y[3]};
}

Propagator propagator_pi_analytic(double area) {
  const double c = std::cos(0.5 * area);
  const cplx s(0.0, -std::sin(0.5 * area));
  return Propagator{cplx(c, 0.0), s, s, cplx(c, 0.0)};
}

Propagator propagator_adiabatic_analytic(const ControlPulse& pulse,
                                         double atom_detuning) {
  if (pulse.kind != PulseKind::AllenEberly)
    throw ModelError("adiabatic propagator: only defined for Allen-Eberly pulses");
  pulse.validate();

  const double half = 0.5 * pulse.t_cut;
  auto rabi = [&](double s) { return pulse.omega_max * sech(s / pulse.tau_c); };
  auto det = [&](double s) {
    return pulse.chirp_span * std::tanh(s / pulse.tau_c) + atom_detuning;
  };
  if (rabi(-half) == 0.0 && det(-half) == 0.0)
    throw ModelError("adiabatic propagator: degenerate crossing (Omega = Delta = 0)");

  // Dressed energies (Delta -+ sqrt(Omega^2 + Delta^2))/2; for Omega > 0 the
  // mixing angle theta = atan2(Omega, Delta)/2 stays on one continuous branch.
  using boost::math::quadrature::gauss_kronrod;
  auto lambda_minus = [&](double s) {
    const double o = rabi(s), d = det(s);
    return 0.5 * (d - std::sqrt(o * o + d * d));
  };
  auto lambda_plus = [&](double s) {
    const double o = rabi(s), d = det(s);
    return 0.5 * (d + std::sqrt(o * o + d * d));
  };
  const double phase_minus =
      gauss_kronrod<double, 61>::integrate(lambda_minus, -half, half, 12, 1e-8);
  const double phase_plus =
      gauss_kronrod<double, 61>::integrate(lambda_plus, -half, half, 12, 1e-8);
  const cplx um = std::exp(cplx(0.0, -phase_minus));
  const cplx up = std::exp(cplx(0.0, -phase_plus));

  const double th_a = 0.5 * std::atan2(rabi(-half), det(-half));
  const double th_b = 0.5 * std::atan2(rabi(half), det(half));
  const double ca = std::cos(th_a), sa = std::sin(th_a);
  const double cb = std::cos(th_b), sb = std::sin(th_b);
  return Propagator{cb * ca * um + sb * sa * up, sb * ca * up - cb * sa * um,
                    cb * sa * up - sb * ca * um, sb * sa * um + cb * ca * up};
}

TransferProfile transfer_profile(const ControlPulse& pulse1,
                                 const ControlPulse& pulse2,
                                 const std::vector<double>& detunings,
                                 const TransferOptions& opts) {
  const std::size_t n = detunings.size();
  TransferProfile prof;
  prof.detunings = detunings;
  prof.t1.resize(n);
  prof.t2.resize(n);
  prof.t_double.resize(n);
  if (n == 0) return prof;

  const bool shared = pulse1.same_shape(pulse2);

  auto solve_at = [&](double dj, cplx& o1, cplx& o2) {
    const Propagator u1 = propagate_numeric(pulse1, dj, opts.tol);
    o1 = u1.se;
    o2 = shared ? u1.es : propagate_numeric(pulse2, dj, opts.tol).es;
  };

  const bool decimate = opts.decimate && n > 2048;
  if (!decimate) {
    detail::parallel_for(n, opts.threads, [&](std::size_t i) {
      solve_at(detunings[i], prof.t1[i], prof.t2[i]);
    });
  } else {
    // exact solve on every 4th point, cubic interpolation of re/im between;
    // the ragged tail past the last node is solved exactly
    const std::size_t step = 4;
    const std::size_t last_node = ((n - 1) / step) * step;
    const std::size_t nodes = last_node / step + 1;
    std::vector<double> r1(nodes), i1(nodes), r2(nodes), i2(nodes);
    detail::parallel_for(nodes, opts.threads, [&](std::size_t j) {
      cplx a, b;
      solve_at(detunings[j * step], a, b);
      r1[j] = a.real();
      i1[j] = a.imag();
      r2[j] = b.real();
      i2[j] = b.imag();
    });
    for (std::size_t i = 0; i <= last_node; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(step);
      prof.t1[i] = cplx(detail::catmull_rom(r1, x), detail::catmull_rom(i1, x));
      prof.t2[i] = cplx(detail::catmull_rom(r2, x), detail::catmull_rom(i2, x));
    }
    for (std::size_t i = last_node + 1; i < n; ++i)
      solve_at(detunings[i], prof.t1[i], prof.t2[i]);
  }
  for (std::size_t i = 0; i < n; ++i) prof.t_double[i] = prof.t2[i] * prof.t1[i];
  return prof;
}

void write_transfer_csv(std::ostream& os, const TransferProfile& profile) {
  os << "detuning_rad_s,re_t1,im_t1,re_t2,im_t2,re_tdouble,im_tdouble\n";
  for (std::size_t i = 0; i < profile.detunings.size(); ++i) {
    os << fmt_double(profile.detunings[i]) << ',' << fmt_double(profile.t1[i].real())
       << ',' << fmt_double(profile.t1[i].imag()) << ','
       << fmt_double(profile.t2[i].real()) << ',' << fmt_double(profile.t2[i].imag())
       << ',' << fmt_double(profile.t_double[i].real()) << ','
       << fmt_double(profile.t_double[i].imag()) << '\n';
  }
}

}  // namespace afc
