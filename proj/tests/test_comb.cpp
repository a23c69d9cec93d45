#include <doctest.h>

#include <cmath>
#include <sstream>

#include "afc/comb.hpp"
#include "afc/fft.hpp"

using namespace afc;

namespace {

CombSpec pr_comb() {
  return CombSpec{hz_to_rad(25e3), hz_to_rad(100e3), 40, 4.0};
}

SpectralGrid pr_grid() {
  // spacing Delta/64 = gamma/16, span covers 2*Gamma
  return SpectralGrid{hz_to_rad(100e3) / 64.0, 8192};
}

}  // namespace

TEST_CASE("finesse") {
  CHECK(comb_finesse(pr_comb()) == doctest::Approx(4.0));
  CHECK(comb_finesse(CombSpec{hz_to_rad(1e3), hz_to_rad(1e3), 10, 1.0}) ==
        doctest::Approx(1.0));  // degenerate flat comb
  CHECK(comb_finesse(CombSpec{hz_to_rad(2e3), hz_to_rad(20e3), 600, 40.0}) ==
        doctest::Approx(10.0));
}

TEST_CASE("multimode capacity") {
  const CombSpec pr = pr_comb();
  const Capacity c0 = multimode_capacity(pr, 0.0);
  CHECK(c0.real == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
  CHECK(c0.integer == 6);

  // narrow comb, long chirped gate
  const CombSpec narrow{hz_to_rad(1e3), hz_to_rad(4e3), 1000, 4.0};
  const Capacity cn = multimode_capacity(narrow, 8.75e-6);
  CHECK(cn.real == doctest::Approx(160.8333).epsilon(1e-4));
  CHECK(cn.integer == 160);

  // boundary of single-mode storage
  const Capacity c1 = multimode_capacity(pr, pr.echo_time() - pr.mode_duration());
  CHECK(c1.real == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(multimode_capacity(pr, pr.echo_time()), ModelError);
  CHECK_THROWS_AS(multimode_capacity(pr, -1e-9), ModelError);
}

TEST_CASE("capacity scales linearly with peak count") {
  CombSpec a = pr_comb();
  CombSpec b = a;
  b.peak_count = 80;
  CHECK(multimode_capacity(b, 0.0).real ==
        doctest::Approx(2.0 * multimode_capacity(a, 0.0).real).epsilon(1e-12));
}

TEST_CASE("depth profile values") {
  const CombSpec pr = pr_comb();
  const SpectralGrid grid = pr_grid();
  const DepthProfile prof = build_depth_profile(pr, grid);

  // peak centers sit on grid samples (Delta = 64 spacings, peaks at half
  // spacing offsets for even peak count -> at 32 mod 64)
  double max_d = 0.0;
  for (double d : prof.depth) max_d = std::max(max_d, d);
  CHECK(max_d == doctest::Approx(4.0).epsilon(0.01));

  // midway between the two central peaks: omega = 0 exactly
  const std::size_t mid = grid.count / 2;
  CHECK(prof.grid.omega(mid) == doctest::Approx(0.0));
  CHECK(prof.depth[mid] == doctest::Approx(2.0 * 4.0 * std::exp(-16.0 * std::log(2.0)))
                               .epsilon(1e-3));

  // phase is odd about the comb center
  CHECK(std::abs(prof.phase[mid]) < 1e-9);
  for (std::size_t k = 1; k < 50; ++k)
    CHECK(prof.phase[mid + k] == doctest::Approx(-prof.phase[mid - k]).epsilon(1e-9));

  for (double d : prof.depth) CHECK(d >= 0.0);
}

TEST_CASE("depth profile is periodic over the comb interior") {
  const CombSpec pr = pr_comb();
  const SpectralGrid grid = pr_grid();
  const DepthProfile prof = build_depth_profile(pr, grid);
  const std::size_t period = 64;  // Delta / spacing
  const double edge = std::abs(pr.peak_center(0));
  double worst = 0.0;
  for (std::size_t k = 0; k + period < grid.count; ++k) {
    const double w = grid.omega(k);
    if (w < -edge + pr.peak_spacing || w + pr.peak_spacing > edge - pr.peak_spacing)
      continue;
    worst = std::max(worst, std::abs(prof.depth[k] - prof.depth[k + period]));
  }
  CHECK(worst < 1e-3 * pr.depth_per_peak);
}

TEST_CASE("Kramers-Kronig causality of the comb response") {
  const CombSpec pr = pr_comb();
  const SpectralGrid grid = pr_grid();
  const DepthProfile prof = build_depth_profile(pr, grid);

  std::vector<cplx> h(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k)
    h[grid.to_bin(k)] = std::exp(cplx(-0.5 * prof.depth[k], prof.phase[k]));
  Fft fft(grid.count);
  const auto impulse = fft.raw_forward(h);  // lag domain
  double total = 0.0, anticausal = 0.0;
  for (std::size_t m = 0; m < grid.count; ++m) {
    const double e = std::norm(impulse[m]);
    total += e;
    if (m > grid.count / 2) anticausal += e;
  }
  CHECK(anticausal / total < 1e-4);
}

TEST_CASE("grid validation errors") {
  const CombSpec pr = pr_comb();
  CHECK_THROWS_AS(build_depth_profile(pr, SpectralGrid{pr.peak_width_fwhm, 8192}),
                  ModelError);  // too coarse
  CHECK_THROWS_AS(build_depth_profile(pr, SpectralGrid{pr.peak_width_fwhm / 16.0, 256}),
                  ModelError);  // span too small
  CHECK_THROWS_AS(build_depth_profile(pr, SpectralGrid{pr.peak_width_fwhm / 16.0, 1000}),
                  ModelError);  // not a power of two
}

TEST_CASE("comb spec invariants") {
  CHECK_THROWS_AS((CombSpec{hz_to_rad(100e3), hz_to_rad(25e3), 40, 4.0}.validate()),
                  ModelError);  // peaks not resolved
  CHECK_THROWS_AS((CombSpec{0.0, hz_to_rad(25e3), 40, 4.0}.validate()), ModelError);
  CHECK_THROWS_AS((CombSpec{hz_to_rad(1e3), hz_to_rad(4e3), 0, 4.0}.validate()),
                  ModelError);
  CHECK_THROWS_AS((CombSpec{hz_to_rad(1e3), hz_to_rad(4e3), 10, -1.0}.validate()),
                  ModelError);
}

TEST_CASE("depth CSV export") {
  const CombSpec pr = pr_comb();
  SpectralGrid grid{pr.peak_spacing / 64.0, 8192};
  const DepthProfile prof = build_depth_profile(pr, grid);
  std::ostringstream os;
  write_depth_csv(os, prof);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "omega_rad_s,depth,phase_rad");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == grid.count);
}
