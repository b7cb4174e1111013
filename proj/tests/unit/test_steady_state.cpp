#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "rabisplit/spectrum.hpp"
#include "rabisplit/steady_state.hpp"

using namespace rabisplit;
using namespace rabisplit::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("photon number at the critical inversion matches the frozen quadrature value",
          "[steadystate]") {
  const auto p = split_ref();
  const double nc = critical_inversion(p);
  CHECK_THAT(nc, WithinAbs(-32.45125, 1e-12));
  const auto n = photon_number(p, nc);
  CHECK_THAT(n.absolute, WithinRel(kSplitRefPhotonsAtCritical, 1e-12));
  CHECK_THAT(n.per_excited * excited_population(p, nc), WithinRel(n.absolute, 1e-15));
  CHECK_THAT(excited_population(p, nc), WithinAbs(58.774375, 1e-12));
}

TEST_CASE("photon number vanishes without excited emitters or coupling", "[steadystate]") {
  const auto p = split_ref();
  CHECK(photon_number(p, -p.n0()).absolute == 0.0);

  auto weak = split_ref();
  weak.g2 = 1e-12;
  CHECK(photon_number(weak, 0.0).absolute < 1e-13);
}

TEST_CASE("photon number refuses inversions at or above threshold", "[steadystate]") {
  const auto p = pumped_ref(500);
  CHECK_THROWS_MATCHES(photon_number(p, threshold_inversion(p)), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::AboveThreshold; }));
  CHECK_THROWS_AS(photon_number(p, 130.0), Error);
}

TEST_CASE("pump for the critical inversion reproduces P_c", "[steadystate]") {
  const auto p = split_ref();
  const double pc = pump_for_inversion(p, critical_inversion(p));
  CHECK_THAT(pc, WithinRel(kSplitRefCriticalPump, 1e-12));
  CHECK_THAT(solve_steady_state(p, pc).inversion, WithinAbs(critical_inversion(p), 1e-9));
}

TEST_CASE("pump_for_inversion limits and domain", "[steadystate]") {
  const auto p = split_ref();
  CHECK(pump_for_inversion(p, -p.n0() + 1e-9) < 1e-10);

  const auto led = pumped_ref(100);
  CHECK(pump_for_inversion(led, 100.0 - 1e-6) > 1e7);

  auto domain = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code() == ErrorCode::DomainError;
    }
    return false;
  };
  CHECK(domain([&] { pump_for_inversion(p, -p.n0()); }));
  CHECK(domain([&] { pump_for_inversion(p, threshold_inversion(p)); }));
  CHECK(domain([&] { pump_for_inversion(led, 100.0); }));
}

TEST_CASE("zero pump gives the ground state without iteration", "[steadystate]") {
  const auto p = split_ref();
  const auto s = solve_steady_state(p, 0.0);
  CHECK(s.inversion == -150.0);
  CHECK(s.photons == 0.0);
  CHECK(s.n_excited == 0.0);
  CHECK(s.n_ground == 150.0);
  CHECK_THAT(s.coherence, WithinRel(kSplitRefCoherenceFloor, 1e-12));
}

TEST_CASE("LED photon number saturates while the laser passes threshold", "[steadystate]") {
  const auto led = pumped_ref(100);
  const auto s1 = solve_steady_state(led, 1e3);
  const auto s2 = solve_steady_state(led, 1e4);
  CHECK(s2.inversion > 99.0);
  CHECK(s2.inversion < 100.0);
  // <n> tends to g2 gamma_perp N0/((2 kappa + gamma_perp)(kappa gamma_perp/2 - g2 N0))
  const double n_sat = 4.0 * 10.0 * 100.0 / (210.0 * (500.0 - 400.0));
  CHECK(s2.photons < n_sat);
  CHECK(s2.photons - s1.photons < 0.02 * n_sat);
  CHECK(n_sat - s2.photons < 0.002 * n_sat);

  const auto laser = pumped_ref(500);
  CHECK(threshold_inversion(laser) == 125.0);
  const auto above = solve_steady_state(laser, 10.0);
  CHECK(above.inversion < 125.0);
  CHECK(above.inversion > 120.0);
  CHECK(above.photons > 1.0);
}

TEST_CASE("inter-emitter correlation closed forms", "[steadystate]") {
  const auto p = split_ref();
  CHECK_THAT(coherence_floor(p), WithinRel(kSplitRefCoherenceFloor, 1e-13));
  CHECK_THAT(coherence_floor(single_peak_ref()), WithinRel(kSinglePeakRefCoherenceFloor, 1e-13));
  // |C0| grows with g2 for this pair
  CHECK(std::abs(coherence_floor(single_peak_ref())) < std::abs(coherence_floor(split_ref())));

  const double n = -20.0;
  const auto corr = inter_emitter_correlation(p, n);
  CHECK_THAT(corr.d_corr, WithinRel(corr.vv - excited_population(p, n), 1e-14));
  CHECK_THAT(corr.coherence, WithinRel(corr.d_corr / excited_population(p, n), 1e-12));
}

TEST_CASE("uncoupled emitters carry no cross-correlation", "[steadystate]") {
  for (double g2 : {1e-9, 1e-12}) {
    auto p = split_ref();
    p.g2 = g2;
    CHECK_THAT(coherence_floor(p), WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("coherence at the critical inversion equals -x(1+x^2)/(1+x)^3", "[steadystate][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const double x = 2 * p.kappa / p.gamma_perp;
    const double bound = -x * (1 + x * x) / ((1 + x) * (1 + x) * (1 + x));
    CHECK_THAT(coherence(p, critical_inversion(p)), WithinAbs(bound, 1e-10));
  }
}

TEST_CASE("steady-state invariants over random parameter sets", "[steadystate][property]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const auto p = random_params(rng);
    const auto pumps = Eigen::VectorXd::LinSpaced(60, 0.0, 20.0);
    double last_n = -1.0, last_inv = -2.0 * p.n0();
    for (Eigen::Index i = 0; i < pumps.size(); ++i) {
      const auto s = solve_steady_state(p, pumps(i));
      INFO("g2=" << p.g2 << " kappa=" << p.kappa << " gp=" << p.gamma_perp << " N0=" << p.n0()
                 << " P=" << pumps(i));
      // strict monotonicity
      CHECK(s.inversion > last_inv);
      CHECK(s.photons > last_n);
      last_inv = s.inversion;
      last_n = s.photons;
      // populations
      CHECK_THAT(s.n_excited + s.n_ground, WithinRel(p.n0(), 1e-14));
      CHECK(s.n_excited >= 0.0);
      CHECK(s.n_ground >= 0.0);
      CHECK(gain_margin(p, s.inversion) > 0.0);
      CHECK((s.photons == 0.0) == (pumps(i) == 0.0));
      CHECK_THAT(s.sigma, WithinRel(2 * p.kappa * s.photons, 1e-15));
      // C < 0 exactly when N < 0
      if (s.inversion != 0.0) CHECK((s.coherence < 0.0) == (s.inversion < 0.0));
      if (pumps(i) > 0.0) {
        CHECK_THAT(pump_for_inversion(p, s.inversion), WithinRel(pumps(i), 1e-9));
        const double balance = p.gamma_par * (pumps(i) * s.n_ground - s.n_excited);
        CHECK_THAT(balance, WithinRel(2 * p.kappa * s.photons, 1e-9));
      }
    }
  }
}

TEST_CASE("closed forms agree with quadrature of their spectra", "[steadystate][quadrature]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_params(rng);
    const double n = random_inversion(p, rng);
    INFO("g2=" << p.g2 << " kappa=" << p.kappa << " gp=" << p.gamma_perp << " N0=" << p.n0()
               << " N=" << n);
    CHECK_THAT(integrate_spectrum(p, n).value, WithinRel(photon_number(p, n).absolute, 1e-6));
    CHECK_THAT(integrate_polarization(p, n).value,
               WithinRel(inter_emitter_correlation(p, n).vv, 1e-6));
  }
}

TEST_CASE("coherence floor agrees with quadrature of the polarization spectrum", "[steadystate]") {
  // C is N_e independent; integrate at an inversion with N_e = 1 and
  // c equal to its zero-pump value by shifting N0.
  auto p = split_ref();
  p.n_emitters = 152;
  const double n = -150.0;  // N_e = 1, c = kappa gamma_perp/2 + 150 g2
  CHECK_THAT(integrate_polarization(p, n).value - 1.0, WithinRel(kSplitRefCoherenceFloor, 1e-9));
}

TEST_CASE("long double instantiation agrees with double", "[steadystate]") {
  SystemParams<long double> p;
  p.g2 = 100;
  p.kappa = 80;
  p.gamma_perp = 19;
  p.n_emitters = 150;
  p = validate(p);
  const long double pc = pump_for_inversion(p, critical_inversion(p));
  CHECK_THAT(static_cast<double>(pc), WithinRel(kSplitRefCriticalPump, 1e-15));
  const auto s = solve_steady_state(p, pc);
  CHECK(std::abs(static_cast<double>(s.inversion - critical_inversion(p))) < 1e-12);
}
