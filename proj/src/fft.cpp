#include "afc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace afc {

namespace {
// FFTW planning is not reentrant; execution on private buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  in_ = fftw_malloc(sizeof(fftw_complex) * n);
  out_ = fftw_malloc(sizeof(fftw_complex) * n);
  if (in_ == nullptr || out_ == nullptr) throw std::bad_alloc();
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n),
                               static_cast<fftw_complex*>(in_),
                               static_cast<fftw_complex*>(out_),
                               FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n),
                               static_cast<fftw_complex*>(in_),
                               static_cast<fftw_complex*>(out_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(in_);
  fftw_free(out_);
}

std::vector<cplx> Fft::run(std::span<const cplx> x, bool forward) {
  if (x.size() != n_) throw std::invalid_argument("Fft: size mismatch");
  std::memcpy(in_, x.data(), sizeof(cplx) * n_);
  fftw_execute(static_cast<fftw_plan>(forward ? plan_fwd_ : plan_bwd_));
  std::vector<cplx> y(n_);
  std::memcpy(y.data(), out_, sizeof(cplx) * n_);
  return y;
}

std::vector<cplx> Fft::raw_forward(std::span<const cplx> x) { return run(x, true); }
std::vector<cplx> Fft::raw_backward(std::span<const cplx> x) { return run(x, false); }

std::vector<cplx> Fft::to_freq(std::span<const cplx> time_signal, double dt) {
  auto y = run(time_signal, false);  // e^{+i...} kernel
  for (auto& v : y) v *= dt;
  return y;
}

std::vector<cplx> Fft::to_time(std::span<const cplx> spectrum, double dt) {
  auto y = run(spectrum, true);
  const double scale = 1.0 / (static_cast<double>(n_) * dt);
  for (auto& v : y) v *= scale;
  return y;
}

}  // namespace afc
