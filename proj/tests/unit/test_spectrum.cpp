#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "rabisplit/spectrum.hpp"

using namespace rabisplit;
using namespace rabisplit::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("roots at zero pump for the split system", "[spectrum]") {
  const auto r = roots(split_ref(), -150.0);
  CHECK_THAT(r.plus.real(), WithinRel(-kSplitRefRootReal, 1e-14));
  CHECK_THAT(r.minus.real(), WithinRel(kSplitRefRootReal, 1e-14));
  CHECK_THAT(r.plus.imag(), WithinRel(-44.75, 1e-15));
  CHECK_THAT(r.minus.imag(), WithinRel(-44.75, 1e-15));
}

TEST_CASE("decoupled roots are the bare decay rates", "[spectrum]") {
  for (auto [kappa, gp] : {std::pair{80.0, 19.0}, std::pair{3.0, 40.0}}) {
    const auto p = make_params(5.0, kappa, gp, 100);
    const auto r = roots(p, 0.0);
    const double lo = std::min(kappa, gp / 2), hi = std::max(kappa, gp / 2);
    CHECK(r.plus.real() == 0.0);
    CHECK(r.minus.real() == 0.0);
    CHECK_THAT(std::max(r.plus.imag(), r.minus.imag()), WithinRel(-lo, 1e-14));
    CHECK_THAT(std::min(r.plus.imag(), r.minus.imag()), WithinRel(-hi, 1e-14));
  }
}

TEST_CASE("roots are degenerate at N_E", "[spectrum]") {
  const auto p = split_ref();
  const double ne = eigenmode_split_inversion(p);
  CHECK_THAT(ne, WithinAbs(-12.425625, 1e-12));
  const auto r = roots(p, ne);
  CHECK_THAT(std::abs(r.plus - r.minus), WithinAbs(0.0, 1e-6));
  CHECK_THAT(r.plus.imag(), WithinRel(-(2 * 80.0 + 19.0) / 4, 1e-12));
  // radicand changes sign across N_E
  CHECK(roots(p, ne - 1e-6).plus.real() != 0.0);
  CHECK(roots(p, ne + 1e-6).plus.real() == 0.0);
}

TEST_CASE("both modes decay below threshold", "[spectrum][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_params(rng);
    const double n = random_inversion(p, rng);
    const auto r = roots(p, n);
    CHECK(r.plus.imag() < 0.0);
    CHECK(r.minus.imag() < 0.0);
  }
}

TEST_CASE("stable spectrum form equals the root-factored form", "[spectrum][property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_params(rng);
    const double n = random_inversion(p, rng, 0.05);
    const double w = unit(rng) * 3 * (p.kappa + p.gamma_perp + std::sqrt(p.g2 * p.n0()));
    const double stable = spectral_density(p, n, w);
    CHECK_THAT(spectral_density_from_roots(p, n, w), WithinRel(stable, 1e-12));
    CHECK_THAT(factored_density(p, n, w), WithinRel(stable, 1e-12));
  }
}

TEST_CASE("spectrum is non-negative and symmetric", "[spectrum][property]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(rng);
    const auto s = solve_steady_state(p, std::uniform_real_distribution<double>(0, 5)(rng));
    const auto a = evaluate(p, s, symmetric_grid(default_grid_halfwidth(p, s.inversion), 401));
    CHECK((a.density.array() >= 0.0).all());
    CHECK(a.density == a.density.reverse());
    CHECK(spectral_density(p, s.inversion, 37.5) == spectral_density(p, s.inversion, -37.5));
  }
}

TEST_CASE("spectrum at resonance", "[spectrum]") {
  const auto p = split_ref();
  const double n = -60.0;
  const double c = gain_margin(p, n);
  CHECK_THAT(spectral_density(p, n, 0.0),
             WithinRel(p.g2 * p.gamma_perp * excited_population(p, n) / (c * c), 1e-15));
}

TEST_CASE("peak positions at zero pump and their relation to the roots", "[spectrum]") {
  const auto p = split_ref();
  const auto peaks = peak_positions(p, -150.0);
  REQUIRE(peaks.size() == 2);
  CHECK_THAT(peaks[1], WithinRel(std::sqrt(15760.0 - 4005.125), 1e-15));
  CHECK_THAT(peaks[0], WithinRel(-peaks[1], 1e-15));
  CHECK_THAT(peaks[1], WithinAbs(108.42, 5e-3));
  // peak positions are not the real parts of the roots
  CHECK(std::abs(peaks[1] - kSplitRefRootReal) > 8.0);

  // dense-grid argmax on the factored form (N_e > 0 just above zero pump)
  const double n = -149.999;
  double best = 0.0, best_w = 0.0;
  for (int k = 0; k <= 200000; ++k) {
    const double w = 200.0 * k / 200000;
    const double v = factored_density(p, n, w);
    if (v > best) best = v, best_w = w;
  }
  CHECK_THAT(best_w, WithinAbs(peak_positions(p, n)[1], 2e-3));
}

TEST_CASE("peak merging at the critical inversion", "[spectrum]") {
  const auto p = split_ref();
  const auto at = peak_positions(p, critical_inversion(p));
  REQUIRE(at.size() == 1);
  CHECK(at[0] == 0.0);
  CHECK(splitting(p, critical_inversion(p)) == 0.0);

  const auto single = peak_positions(single_peak_ref(), -150.0);
  CHECK(single.size() == 1);
}

TEST_CASE("two-peak predicate agrees with N < N_c and with dense sampling", "[spectrum][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_params(rng);
    const double n = random_inversion(p, rng);
    const double nc = critical_inversion(p);
    if (std::abs(n - nc) < 1e-6 * (std::abs(nc) + 1)) continue;
    const bool split = peak_positions(p, n).size() == 2;
    CHECK(split == (n < nc));
    CHECK(split == numerically_split(p, n));
  }
}

TEST_CASE("maximal splitting", "[spectrum]") {
  CHECK_THAT(max_splitting(split_ref()), WithinRel(2 * std::sqrt(11754.875), 1e-15));
  CHECK_THAT(max_splitting(split_ref()), WithinAbs(216.84, 5e-3));
  CHECK(max_splitting(single_peak_ref()) == 0.0);
  // 8 g2 N0 = 4 kappa^2 + gamma_perp^2 exactly: g2 = (4*25 + 36)/(8*17) = 1
  CHECK(max_splitting(make_params(1.0, 5.0, 6.0, 17)) == 0.0);
  CHECK_THAT(max_splitting(split_ref()), WithinRel(splitting(split_ref(), -150.0), 1e-15));
}

TEST_CASE("evaluate fills the analysis and rejects states above threshold", "[spectrum]") {
  const auto p = split_ref();
  const auto s = solve_steady_state(p, 0.2);
  const auto grid = symmetric_grid(300.0, 2001);
  const auto a = evaluate(p, s, grid);
  CHECK(a.omega.size() == 2001);
  CHECK(a.omega(0) == -300.0);
  CHECK(a.omega(2000) == 300.0);
  CHECK(a.peak_positions.size() == 2);
  CHECK(count_local_maxima(a.density) == 2);
  CHECK_THAT(a.total_photons, WithinRel(s.photons, 1e-8));

  SteadyState<double> bad = s;
  bad.inversion = threshold_inversion(p) + 1.0;
  CHECK_THROWS_AS(evaluate(p, bad, grid), Error);
}

TEST_CASE("split spectra merge into one as the pump grows", "[spectrum]") {
  const auto p = split_ref();
  for (double pump : {0.2, 0.5}) {
    const auto s = solve_steady_state(p, pump);
    CHECK(peak_positions(p, s.inversion).size() == 2);
  }
  for (double pump : {0.95, 1.2}) {
    const auto s = solve_steady_state(p, pump);
    CHECK(peak_positions(p, s.inversion).size() == 1);
  }
  // the single-peaked system narrows with pump
  const auto q = single_peak_ref();
  double last = 1e300;
  for (double pump : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const auto s = solve_steady_state(q, pump);
    const auto a = evaluate(q, s, symmetric_grid(400.0, 4001));
    if (pump > 0.0) CHECK(count_local_maxima(a.density) == 1);
    const double w = numerical_fwhm(q, s.inversion);
    CHECK(w < last);
    last = w;
  }
}

TEST_CASE("default grid resolves the split peaks", "[spectrum]") {
  const auto p = split_ref();
  const auto s = solve_steady_state(p, 0.2);
  const double hw = default_grid_halfwidth(p, s.inversion);
  CHECK(hw >= 1.5 * max_splitting(p));
  CHECK(symmetric_grid(hw).size() == kDefaultGridPoints);
}
