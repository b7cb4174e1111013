#ifndef RABISPLIT_LINEWIDTH_HPP
#define RABISPLIT_LINEWIDTH_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rabisplit/error.hpp"
#include "rabisplit/params.hpp"
#include "rabisplit/steady_state.hpp"

namespace rabisplit {

// r = 8 g2 (N_th - N)/(2 kappa + gamma_perp)^2 = 2c/b^2. r == 1 at N_c, the
// spectrum is single-peaked for r <= 1 and r -> 0 at threshold.
template <typename Scalar>
Scalar linewidth_parameter(const SystemParams<Scalar>& p, Scalar inversion) {
  const Scalar b = damping_sum(p);
  return Scalar(2) * gain_margin(p, inversion) / (b * b);
}

// FWHM of the single-peaked spectrum as a function of r. For r < 1 the
// bracket r - 1 + sqrt(r^2 + (r-1)^2) is evaluated as
// r^2 / (sqrt(r^2 + (1-r)^2) + 1 - r) to avoid cancellation near threshold.
template <typename Scalar>
Scalar fwhm_from_parameter(const SystemParams<Scalar>& p, Scalar r) {
  using std::sqrt;
  const Scalar root = sqrt(r * r + (Scalar(1) - r) * (Scalar(1) - r));
  const Scalar bracket =
      r < Scalar(1) ? r * r / (root + Scalar(1) - r) : r - Scalar(1) + root;
  return (Scalar(2) * p.kappa + p.gamma_perp) / sqrt(Scalar(2)) * sqrt(bracket);
}

template <typename Scalar>
Scalar linewidth_at_inversion(const SystemParams<Scalar>& p, Scalar inversion) {
  detail::require_below_threshold(p, inversion);
  const Scalar r = linewidth_parameter(p, inversion);
  if (r > Scalar(1))
    throw Error(ErrorCode::SplitSpectrum,
                "spectrum is double-peaked (r > 1); FWHM is undefined, report the splitting");
  return fwhm_from_parameter(p, r);
}

template <typename Scalar>
Scalar linewidth(const SystemParams<Scalar>& p, const SteadyState<Scalar>& state) {
  return linewidth_at_inversion(p, state.inversion);
}

// Regime where the small-r asymptote is trusted.
inline constexpr double kAsymptoticValidity = 0.01;

template <typename Scalar>
struct AsymptoticLinewidth {
  Scalar from_parameter;  // (2 kappa + gamma_perp) r / 2
  Scalar from_power;      // (2 kappa gamma_perp/(2 kappa + gamma_perp))^2 (hbar w0/P_out) N_e/N_th
  bool valid;             // r < 0.01
};

template <typename Scalar>
AsymptoticLinewidth<Scalar> linewidth_asymptotic(const SystemParams<Scalar>& p,
                                                 const SteadyState<Scalar>& state) {
  detail::require_below_threshold(p, state.inversion);
  const Scalar r = linewidth_parameter(p, state.inversion);
  const Scalar sum = Scalar(2) * p.kappa + p.gamma_perp;
  const Scalar prefactor = Scalar(2) * p.kappa * p.gamma_perp / sum;

  // hbar*w0/<P_out> * N_e; with <P_out> = hbar w0 2 kappa <n>. At zero pump
  // both vanish and the ratio is taken from <n>/N_e.
  Scalar energy_per_power_times_ne;
  if (state.photons > Scalar(0)) {
    const Scalar energy = p.photon_energy.value_or(Scalar(1));
    const Scalar power = energy * Scalar(2) * p.kappa * state.photons;
    energy_per_power_times_ne = energy / power * state.n_excited;
  } else {
    const Scalar per_excited = photon_number(p, state.inversion).per_excited;
    energy_per_power_times_ne = Scalar(1) / (Scalar(2) * p.kappa * per_excited);
  }
  return {sum / Scalar(2) * r,
          prefactor * prefactor * energy_per_power_times_ne / threshold_inversion(p),
          r < Scalar(kAsymptoticValidity)};
}

template <typename Scalar>
struct LinewidthPoint {
  Scalar pump{};
  Scalar inversion{};
  Scalar photons{};
  Scalar r{};
  std::optional<Scalar> fwhm;  // empty in the split regime
  Scalar fwhm_asymptotic{};
  bool asymptotic_valid{};
  Scalar out_flux{};                 // 2 kappa <n>
  std::optional<Scalar> out_power;   // hbar w0 2 kappa <n> when photon_energy is set
  bool split() const { return !fwhm.has_value(); }
};

template <typename Scalar>
LinewidthPoint<Scalar> linewidth_point(const SystemParams<Scalar>& p,
                                       const SteadyState<Scalar>& state) {
  LinewidthPoint<Scalar> pt;
  pt.pump = state.pump;
  pt.inversion = state.inversion;
  pt.photons = state.photons;
  pt.r = linewidth_parameter(p, state.inversion);
  if (pt.r <= Scalar(1)) pt.fwhm = fwhm_from_parameter(p, pt.r);
  const auto asym = linewidth_asymptotic(p, state);
  pt.fwhm_asymptotic = asym.from_parameter;
  pt.asymptotic_valid = asym.valid;
  pt.out_flux = Scalar(2) * p.kappa * state.photons;
  if (p.photon_energy) pt.out_power = *p.photon_energy * pt.out_flux;
  return pt;
}

template <typename Scalar, typename Derived>
std::vector<LinewidthPoint<Scalar>> pump_sweep(const SystemParams<Scalar>& p,
                                               const Eigen::DenseBase<Derived>& pumps) {
  std::vector<LinewidthPoint<Scalar>> out;
  out.reserve(static_cast<std::size_t>(pumps.size()));
  for (Eigen::Index i = 0; i < pumps.size(); ++i)
    out.push_back(linewidth_point(p, solve_steady_state(p, Scalar(pumps(i)))));
  return out;
}

// P = 0 followed by `log_points` log-spaced pumps on [lo, hi].
inline Eigen::VectorXd default_pump_grid(double lo = 1e-3, double hi = 10.0,
                                         Eigen::Index log_points = 200) {
  Eigen::VectorXd grid(log_points + 1);
  grid(0) = 0.0;
  const Eigen::VectorXd exponents =
      Eigen::VectorXd::LinSpaced(log_points, std::log10(lo), std::log10(hi));
  for (Eigen::Index i = 0; i < log_points; ++i) grid(i + 1) = std::pow(10.0, exponents(i));
  grid(log_points) = hi;
  return grid;
}

}  // namespace rabisplit

#endif  // RABISPLIT_LINEWIDTH_HPP
