#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "rabisplit/regimes.hpp"

using namespace rabisplit;
using namespace rabisplit::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("critical inversions of the reference systems", "[regimes]") {
  const auto b = critical_inversions(split_ref());
  CHECK_THAT(b.threshold, WithinRel(7.6, 1e-15));
  CHECK_THAT(b.critical, WithinRel(-32.45125, 1e-15));
  CHECK_THAT(b.eigenmode, WithinRel(-12.425625, 1e-15));
  CHECK_THAT(b.critical_from_threshold, WithinRel(b.critical, 1e-14));

  const auto a = critical_inversions(single_peak_ref());
  CHECK_THAT(a.threshold, WithinRel(76.0, 1e-15));
  CHECK_THAT(a.critical, WithinRel(-324.5125, 1e-15));
  CHECK_THAT(a.eigenmode, WithinRel(-124.25625, 1e-15));
}

TEST_CASE("ordering N_c <= N_E < 0 < N_th", "[regimes][property]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const auto inv = critical_inversions(p);
    CHECK(inv.critical <= inv.eigenmode);
    CHECK(inv.eigenmode <= 0.0);
    CHECK(inv.threshold > 0.0);
    CHECK_THAT(inv.critical_from_threshold, WithinRel(inv.critical, 1e-13));
  }
}

TEST_CASE("splitting conditions", "[regimes]") {
  CHECK(split_conditions(split_ref()).spectral);
  CHECK(split_conditions(split_ref()).eigenmode);
  CHECK_FALSE(split_conditions(single_peak_ref()).spectral);
  CHECK(split_conditions(single_peak_ref()).eigenmode);
  // a spectral split implies an eigenmode split
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const auto c = split_conditions(p);
    if (c.spectral) CHECK(c.eigenmode);
    CHECK(c.spectral == (critical_inversion(p) > -p.n0()));
  }
}

TEST_CASE("critical pumps of the reference systems", "[regimes]") {
  const auto b = critical_pumps(split_ref());
  REQUIRE(b.p_c);
  REQUIRE(b.p_e);
  REQUIRE(b.p_st);
  CHECK_FALSE(b.led);
  CHECK_THAT(*b.p_c, WithinRel(kSplitRefCriticalPump, 1e-12));
  CHECK(*b.p_e > *b.p_c);
  CHECK_THAT(photon_number(split_ref(), inversion_for_pump(split_ref(), *b.p_st)).absolute,
             WithinRel(1.0, 1e-9));

  const auto a = critical_pumps(single_peak_ref());
  CHECK_FALSE(a.p_c);
  CHECK(a.p_e);
  CHECK(a.p_st);
}

TEST_CASE("stimulated-emission pump is absent when <n> = 1 is unreachable", "[regimes]") {
  const auto led = critical_pumps(pumped_ref(100));
  CHECK(led.led);
  CHECK_FALSE(led.p_st);
  const auto laser = critical_pumps(pumped_ref(500));
  CHECK_FALSE(laser.led);
  REQUIRE(laser.p_st);
  CHECK(*laser.p_st > 2.0);
  CHECK(*laser.p_st < 5.0);
}

TEST_CASE("classification", "[regimes]") {
  const auto b = split_ref();
  const auto pumps = critical_pumps(b);
  CHECK(classify(b, 0.0) == Region::SplitSpectrum);
  CHECK(classify(b, 0.5) == Region::SplitSpectrum);
  CHECK(classify(b, *pumps.p_c) == Region::WeakCouplingLaser);
  CHECK(classify(b, *pumps.p_st) == Region::WeakCouplingLaser);
  CHECK(classify(b, *pumps.p_st * 1.01) == Region::Lasing);
  CHECK(classify(b, 1e6) == Region::Lasing);

  CHECK(classify(pumped_ref(100), 0.0) == Region::Led);
  CHECK(classify(pumped_ref(100), 10.0) == Region::Led);
  CHECK(classify(single_peak_ref(), 0.0) == Region::WeakCouplingLaser);

  CHECK_THROWS_AS(classify(b, -1.0), Error);
  CHECK(to_string(Region::Led) == "LED(i)");
  CHECK(to_string(Region::Lasing) == "lasing(iv)");
}

TEST_CASE("threshold equal to N0 is classified as LED", "[regimes]") {
  // kappa gamma_perp/(2 g2) = 100 = N0
  const auto p = make_params(1.0, 10.0, 20.0, 100);
  CHECK(threshold_inversion(p) == 100.0);
  CHECK(critical_pumps(p).led);
  CHECK(classify(p, 3.0) == Region::Led);
}

TEST_CASE("regime report", "[regimes]") {
  const auto r = regime_report(split_ref(), std::optional<double>(0.2));
  REQUIRE(r.region);
  CHECK(*r.region == Region::SplitSpectrum);
  CHECK(r.conditions.spectral);
  CHECK_FALSE(regime_report(split_ref()).region);
}

TEST_CASE("phase diagram", "[regimes]") {
  const Eigen::VectorXd g2 = Eigen::VectorXd::LinSpaced(200, 1.0, 200.0);
  const auto d = phase_diagram(split_ref(), g2);
  REQUIRE(d.rows.size() == 200);
  CHECK_THAT(d.vertical_g2, WithinRel(80.0 * 19.0 / 300.0, 1e-15));
  CHECK_THAT(d.vertical_g2, WithinAbs(5.067, 1e-3));

  double last_pc = 0.0;
  for (const auto& row : d.rows) {
    if (row.g2 < d.vertical_g2) CHECK(row.pumps.led);
    else if (row.g2 > d.vertical_g2) CHECK_FALSE(row.pumps.led);
    if (row.pumps.p_c && row.pumps.p_e) CHECK(*row.pumps.p_e > *row.pumps.p_c);
    if (row.pumps.p_c) {
      CHECK(*row.pumps.p_c > last_pc);
      last_pc = *row.pumps.p_c;
    }
    const auto p = make_params(row.g2, 80.0, 19.0, 150);
    CHECK(row.pumps.p_c.has_value() == split_conditions(p).spectral);
  }
  // the row for g2 = 100 matches the direct computation
  CHECK_THAT(*d.rows[99].pumps.p_c, WithinRel(kSplitRefCriticalPump, 1e-12));
}

TEST_CASE("iso-splitting contours lie on circles", "[regimes]") {
  const std::vector<double> gp{1.0, 19.0, 50.0, 120.0, 160.0, 170.0};
  const auto pts = iso_splitting_contour(100.0, 150, 216.84, gp);
  REQUIRE_FALSE(pts.empty());
  for (const auto& q : pts) {
    const auto p = make_params(100.0, q.two_kappa / 2, q.gamma_perp, 150);
    CHECK_THAT(max_splitting(p), WithinRel(216.84, 1e-10));
  }
  for (const auto& q : iso_splitting_contour(100.0, 150, 0.0, gp))
    CHECK_THAT(q.two_kappa * q.two_kappa + q.gamma_perp * q.gamma_perp,
               WithinRel(8.0 * 100 * 150, 1e-14));
}

TEST_CASE("coherence map", "[regimes]") {
  const Eigen::VectorXd tk = Eigen::VectorXd::LinSpaced(40, 10.0, 400.0);
  const Eigen::VectorXd gp = Eigen::VectorXd::LinSpaced(30, 1.0, 200.0);
  const auto m = coherence_map(100.0, 150L, tk, gp, 216.84);
  REQUIRE(m.cells.size() == 1200);
  for (const auto& cell : m.cells) {
    const auto p = make_params(100.0, cell.two_kappa / 2, cell.gamma_perp, 150);
    CHECK_THAT(cell.abs_c0, WithinRel(std::abs(coherence_floor(p)), 1e-15));
    CHECK(cell.abs_c0 < 1.0);
    CHECK(cell.omega_max == max_splitting(p));
  }
  CHECK(m.cells[1].two_kappa == tk(1));
  CHECK(m.cells[40].gamma_perp == gp(1));
  CHECK_THAT(m.cells[0].abs_c0, WithinAbs(1.0, 0.1));
  CHECK_FALSE(m.zero_contour.empty());
  CHECK_FALSE(m.reference_contour.empty());
  for (const auto& q : m.reference_contour) {
    CHECK(q.two_kappa >= 10.0);
    CHECK(q.two_kappa <= 400.0);
  }
  // reference marker sits on the reference contour
  CHECK_THAT(max_splitting(split_ref()), WithinAbs(216.84, 5e-3));
}

TEST_CASE("along a fixed splitting, the bad cavity is more coherent", "[regimes]") {
  const std::vector<double> gp = [] {
    std::vector<double> v;
    for (int i = 1; i <= 160; ++i) v.push_back(i);
    return v;
  }();
  const auto pts = iso_splitting_contour(100.0, 150, max_splitting(split_ref()), gp);
  double last = 2.0;
  for (const auto& q : pts) {
    const double c0 = std::abs(coherence_floor(make_params(100.0, q.two_kappa / 2, q.gamma_perp, 150)));
    CHECK(c0 < last);
    last = c0;
  }
}
