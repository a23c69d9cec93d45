#pragma once

#include <iosfwd>
#include <vector>

#include "afc/pulse.hpp"
#include "afc/units.hpp"

namespace afc {

// 2x2 propagator on the {s, e} subspace, acting on (c_s, c_e).
struct Propagator {
  cplx ss{1.0, 0.0};
  cplx se{0.0, 0.0};
  cplx es{0.0, 0.0};
  cplx ee{1.0, 0.0};

  // max elementwise |U^dag U - I|
  double unitarity_defect() const;
};

Propagator operator*(const Propagator& a, const Propagator& b);

// Integrates i dc/dt = H(t) c over the pulse gate window in the rotating
// frame (H diagonal (0, Delta_j(t)), off-diagonal -Omega_c(t)/2) with an
// adaptive stepper, local error <= tol, step bounded by tau_c/50.
Propagator propagate_numeric(const ControlPulse& pulse, double atom_detuning,
                             double tol);

// Resonant constant-phase propagator of pulse area A:
// [[cos A/2, -i sin A/2], [-i sin A/2, cos A/2]].
Propagator propagator_pi_analytic(double area);

// Dressed-state (adiabatic-following) propagator for an AllenEberly pulse:
// endpoint mixing angles plus the dressed phase integrals u+- evaluated by
// quadrature over the gate.
Propagator propagator_adiabatic_analytic(const ControlPulse& pulse,
                                         double atom_detuning);

struct TransferProfile {
  std::vector<double> detunings;
  std::vector<cplx> t1;        // u_se of pulse 1
  std::vector<cplx> t2;        // u_es of pulse 2
  std::vector<cplx> t_double;  // t2 * t1
};

struct TransferOptions {
  double tol = 1e-9;
  bool decimate = true;  // every 4th point + cubic above 2048 detunings
  int threads = 1;
};

// Double-pass transfer amplitudes over a uniform detuning grid.
TransferProfile transfer_profile(const ControlPulse& pulse1,
                                 const ControlPulse& pulse2,
                                 const std::vector<double>& detunings,
                                 const TransferOptions& opts);

// CSV: detuning_rad_s,re_t1,im_t1,re_t2,im_t2,re_tdouble,im_tdouble
void write_transfer_csv(std::ostream& os, const TransferProfile& profile);

}  // namespace afc
