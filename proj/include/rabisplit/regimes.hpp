#ifndef RABISPLIT_REGIMES_HPP
#define RABISPLIT_REGIMES_HPP

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rabisplit/error.hpp"
#include "rabisplit/parallel.hpp"
#include "rabisplit/params.hpp"
#include "rabisplit/spectrum.hpp"
#include "rabisplit/steady_state.hpp"

namespace rabisplit {

template <typename Scalar>
struct CriticalInversions {
  Scalar threshold;      // N_th = kappa gamma_perp/(2 g2)
  Scalar critical;       // N_c, spectral splitting
  Scalar eigenmode;      // N_E, eigenmode splitting
  Scalar critical_from_threshold;  // -(1/2)(2 kappa/gamma_perp + gamma_perp/(2 kappa)) N_th
};

template <typename Scalar>
CriticalInversions<Scalar> critical_inversions(const SystemParams<Scalar>& p) {
  const Scalar nth = threshold_inversion(p);
  const Scalar x = Scalar(2) * p.kappa / p.gamma_perp;
  return {nth, critical_inversion(p), eigenmode_split_inversion(p),
          -(x + Scalar(1) / x) * nth / Scalar(2)};
}

struct SplitConditions {
  bool spectral;   // 8 g2 N0 > 4 kappa^2 + gamma_perp^2
  bool eigenmode;  // g sqrt(N0) > |2 kappa - gamma_perp|/4
};

// Both conditions evaluated in the low-pump limit N = -N0.
template <typename Scalar>
SplitConditions split_conditions(const SystemParams<Scalar>& p) {
  using std::abs;
  using std::sqrt;
  return {Scalar(8) * p.g2 * p.n0() > Scalar(4) * p.kappa * p.kappa + p.gamma_perp * p.gamma_perp,
          sqrt(p.g2) * sqrt(p.n0()) > abs(Scalar(2) * p.kappa - p.gamma_perp) / Scalar(4)};
}

// Stimulated emission into the mode is taken to equal spontaneous emission
// into it at <n> = 1.
inline constexpr double kStimulatedPhotonNumber = 1.0;

template <typename Scalar>
struct CriticalPumps {
  std::optional<Scalar> p_c;   // spectral peaks merge
  std::optional<Scalar> p_e;   // eigenmodes merge
  std::optional<Scalar> p_st;  // <n> = 1
  bool led{};                  // N_th >= N0: no lasing at any pump
};

// Inversion where <n> reaches `photons`, if attainable below min(N0, N_th).
template <typename Scalar>
std::optional<Scalar> inversion_for_photons(const SystemParams<Scalar>& p, Scalar photons) {
  Scalar lo = -p.n0();
  Scalar hi = max_inversion(p);
  if (threshold_inversion(p) > p.n0()) {
    // <n> is bounded; compare with its supremum at N -> N0
    if (!(photon_number(p, hi).absolute > photons)) return std::nullopt;
  }
  for (int iter = 0; iter < 4096; ++iter) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (!(mid > lo && mid < hi)) return mid;
    const Scalar n = photon_number(p, mid).absolute;
    if (n < photons) lo = mid;
    else if (n > photons) hi = mid;
    else return mid;
  }
  throw Error(ErrorCode::ConvergenceFailure, "photon-number bisection did not terminate");
}

template <typename Scalar>
CriticalPumps<Scalar> critical_pumps(const SystemParams<Scalar>& p) {
  CriticalPumps<Scalar> out;
  const auto inv = critical_inversions(p);
  out.led = inv.threshold >= p.n0();
  if (inv.critical > -p.n0()) out.p_c = pump_for_inversion(p, inv.critical);
  if (inv.eigenmode > -p.n0()) out.p_e = pump_for_inversion(p, inv.eigenmode);
  if (auto n = inversion_for_photons(p, Scalar(kStimulatedPhotonNumber)))
    out.p_st = pump_for_inversion(p, *n);
  return out;
}

enum class Region { Led = 1, WeakCouplingLaser = 2, SplitSpectrum = 3, Lasing = 4 };

constexpr std::string_view to_string(Region r) {
  switch (r) {
    case Region::Led: return "LED(i)";
    case Region::WeakCouplingLaser: return "weak-coupling-laser(ii)";
    case Region::SplitSpectrum: return "split-spectrum(iii)";
    case Region::Lasing: return "lasing(iv)";
  }
  return "unknown";
}

// Precedence (i) > (iii) > (iv) > (ii); boundaries go to the lower-numbered
// region.
template <typename Scalar>
Region classify(const SystemParams<Scalar>&, const CriticalPumps<Scalar>& pumps, Scalar pump) {
  make_pump(pump);
  if (pumps.led) return Region::Led;
  if (pumps.p_c && pump < *pumps.p_c) return Region::SplitSpectrum;
  if (pumps.p_st && pump > *pumps.p_st) return Region::Lasing;
  return Region::WeakCouplingLaser;
}

template <typename Scalar>
Region classify(const SystemParams<Scalar>& p, Scalar pump) {
  return classify(p, critical_pumps(p), pump);
}

template <typename Scalar>
struct RegimeReport {
  CriticalInversions<Scalar> inversions;
  CriticalPumps<Scalar> pumps;
  SplitConditions conditions;
  std::optional<Region> region;  // set when a pump is given
};

template <typename Scalar>
RegimeReport<Scalar> regime_report(const SystemParams<Scalar>& p,
                                   std::optional<Scalar> pump = std::nullopt) {
  RegimeReport<Scalar> out{critical_inversions(p), critical_pumps(p), split_conditions(p), {}};
  if (pump) out.region = classify(p, out.pumps, *pump);
  return out;
}

template <typename Scalar>
struct PhaseDiagramRow {
  Scalar g2;
  CriticalPumps<Scalar> pumps;
};

template <typename Scalar>
struct PhaseDiagram {
  std::vector<PhaseDiagramRow<Scalar>> rows;
  Scalar vertical_g2;  // N_th = N0
};

// Critical pumps per g2 with the other rates of `base` held fixed.
template <typename Scalar, typename Derived>
PhaseDiagram<Scalar> phase_diagram(const SystemParams<Scalar>& base,
                                   const Eigen::DenseBase<Derived>& g2_grid) {
  PhaseDiagram<Scalar> out;
  out.rows.resize(static_cast<std::size_t>(g2_grid.size()));
  parallel_for(out.rows.size(), [&](std::size_t i) {
    SystemParams<Scalar> p = base;
    p.g2 = Scalar(g2_grid(static_cast<Eigen::Index>(i)));
    p = validate(p);
    out.rows[i] = {p.g2, critical_pumps(p)};
  });
  out.vertical_g2 = base.kappa * base.gamma_perp / (Scalar(2) * base.n0());
  return out;
}

template <typename Scalar>
struct MapPoint {
  Scalar two_kappa;
  Scalar gamma_perp;
};

// Points (2 kappa, gamma_perp) of constant zero-pump splitting `level`. Since
// Omega_max^2 = (8 g2 N0 - 4 kappa^2 - gamma_perp^2)/2 these lie on the circle
// (2 kappa)^2 + gamma_perp^2 = 8 g2 N0 - 2 level^2; one point per sampled
// gamma_perp inside it.
template <typename Scalar>
std::vector<MapPoint<Scalar>> iso_splitting_contour(Scalar g2, long n_emitters, Scalar level,
                                                    const std::vector<Scalar>& gamma_perp) {
  using std::sqrt;
  const Scalar radius2 = Scalar(8) * g2 * Scalar(n_emitters) - Scalar(2) * level * level;
  std::vector<MapPoint<Scalar>> out;
  for (Scalar gp : gamma_perp) {
    const Scalar rest = radius2 - gp * gp;
    if (gp > Scalar(0) && rest > Scalar(0)) out.push_back({sqrt(rest), gp});
  }
  return out;
}

template <typename Scalar>
struct CoherenceCell {
  Scalar two_kappa;
  Scalar gamma_perp;
  Scalar abs_c0;
  Scalar omega_max;
};

template <typename Scalar>
struct CoherenceMap {
  std::vector<CoherenceCell<Scalar>> cells;  // row-major, gamma_perp outer
  Scalar reference_level;
  std::vector<MapPoint<Scalar>> zero_contour;
  std::vector<MapPoint<Scalar>> reference_contour;
};

// |C0| and Omega_max over a (2 kappa, gamma_perp) grid at fixed g2, N0, plus
// the Omega_max = 0 and Omega_max = reference_level contours clipped to the
// grid's bounding box.
template <typename Scalar, typename DerivedK, typename DerivedG>
CoherenceMap<Scalar> coherence_map(Scalar g2, long n_emitters,
                                   const Eigen::DenseBase<DerivedK>& two_kappa_grid,
                                   const Eigen::DenseBase<DerivedG>& gamma_perp_grid,
                                   Scalar reference_level, Eigen::Index contour_samples = 401) {
  CoherenceMap<Scalar> out;
  out.reference_level = reference_level;
  const auto nk = two_kappa_grid.size();
  const auto ng = gamma_perp_grid.size();
  out.cells.resize(static_cast<std::size_t>(nk * ng));
  parallel_for(out.cells.size(), [&](std::size_t idx) {
    const auto ig = static_cast<Eigen::Index>(idx) / nk;
    const auto ik = static_cast<Eigen::Index>(idx) % nk;
    SystemParams<Scalar> p;
    p.g2 = g2;
    p.kappa = Scalar(two_kappa_grid(ik)) / Scalar(2);
    p.gamma_perp = Scalar(gamma_perp_grid(ig));
    p.n_emitters = n_emitters;
    p = validate(p);
    using std::abs;
    out.cells[idx] = {Scalar(two_kappa_grid(ik)), p.gamma_perp, abs(coherence_floor(p)),
                      max_splitting(p)};
  });

  const Scalar kmin = two_kappa_grid.minCoeff(), kmax = two_kappa_grid.maxCoeff();
  const Scalar gmin = gamma_perp_grid.minCoeff(), gmax = gamma_perp_grid.maxCoeff();
  const VectorX<Scalar> samples = VectorX<Scalar>::LinSpaced(contour_samples, gmin, gmax);
  const std::vector<Scalar> gp(samples.data(), samples.data() + samples.size());
  auto clip = [&](std::vector<MapPoint<Scalar>> pts) {
    std::erase_if(pts, [&](const MapPoint<Scalar>& q) {
      return q.two_kappa < kmin || q.two_kappa > kmax;
    });
    return pts;
  };
  out.zero_contour = clip(iso_splitting_contour(g2, n_emitters, Scalar(0), gp));
  out.reference_contour = clip(iso_splitting_contour(g2, n_emitters, reference_level, gp));
  return out;
}

}  // namespace rabisplit

#endif  // RABISPLIT_REGIMES_HPP
