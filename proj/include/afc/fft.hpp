#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afc/units.hpp"

namespace afc {

// Thin FFTW wrapper fixed to one transform size, with the field conventions
// used throughout:
//   analysis    spectrum(w) = sum_t E(t) e^{+i w t} dt
//   synthesis   E(t)        = (1/(N dt)) sum_w spectrum(w) e^{-i w t}
// so a component e^{-i Delta t} sits at bin frequency +Delta and a delay by
// td multiplies the spectrum by e^{+i w td}.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  std::vector<cplx> to_freq(std::span<const cplx> time_signal, double dt);
  std::vector<cplx> to_time(std::span<const cplx> spectrum, double dt);

  // Unnormalized kernels e^{-2pi i mk/N} (forward) and e^{+2pi i mk/N}
  // (backward), for cepstrum-style constructions.
  std::vector<cplx> raw_forward(std::span<const cplx> x);
  std::vector<cplx> raw_backward(std::span<const cplx> x);

 private:
  std::size_t n_;
  void* in_;        // fftw_complex*
  void* out_;
  void* plan_fwd_;  // fftw_plan
  void* plan_bwd_;

  std::vector<cplx> run(std::span<const cplx> x, bool forward);
};

// FFT bin m -> angular frequency (negative frequencies in the upper half).
inline double fft_bin_omega(std::size_t m, std::size_t n, double dt) {
  const double idx = m < n / 2 ? static_cast<double>(m)
                               : static_cast<double>(m) - static_cast<double>(n);
  return two_pi * idx / (static_cast<double>(n) * dt);
}

}  // namespace afc
