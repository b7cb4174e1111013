#ifndef RABISPLIT_STEADY_STATE_HPP
#define RABISPLIT_STEADY_STATE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rabisplit/error.hpp"
#include "rabisplit/params.hpp"

namespace rabisplit {

// Frozen-inversion linear response of field and polarization. With
//   b = kappa + gamma_perp/2,   c = kappa*gamma_perp/2 - g2*N
// the field transfer denominator is c - w^2 - i*b*w, and every closed form
// below follows from the two integrals
//   int dw/2pi 1/|D|^2 = 1/(2bc),   int dw/2pi w^2/|D|^2 = 1/(2b).

template <typename Scalar>
Scalar damping_sum(const SystemParams<Scalar>& p) {
  return p.kappa + p.gamma_perp / Scalar(2);
}

// c(N); positive strictly below the semi-classical threshold.
template <typename Scalar>
Scalar gain_margin(const SystemParams<Scalar>& p, Scalar inversion) {
  return p.kappa * p.gamma_perp / Scalar(2) - p.g2 * inversion;
}

template <typename Scalar>
Scalar threshold_inversion(const SystemParams<Scalar>& p) {
  return p.kappa * p.gamma_perp / (Scalar(2) * p.g2);
}

template <typename Scalar>
Scalar excited_population(const SystemParams<Scalar>& p, Scalar inversion) {
  return (p.n0() + inversion) / Scalar(2);
}

template <typename Scalar>
Scalar ground_population(const SystemParams<Scalar>& p, Scalar inversion) {
  return (p.n0() - inversion) / Scalar(2);
}

// Upper end of the admissible inversion interval, min(N0, N_th).
template <typename Scalar>
Scalar max_inversion(const SystemParams<Scalar>& p) {
  return std::min(p.n0(), threshold_inversion(p));
}

namespace detail {
template <typename Scalar>
void require_below_threshold(const SystemParams<Scalar>& p, Scalar inversion) {
  if (!(gain_margin(p, inversion) > Scalar(0)))
    throw Error(ErrorCode::AboveThreshold,
                "inversion " + std::to_string(static_cast<double>(inversion)) +
                    " is at or above the semi-classical threshold " +
                    std::to_string(static_cast<double>(threshold_inversion(p))));
}
}  // namespace detail

template <typename Scalar>
struct PhotonNumber {
  Scalar per_excited;  // <n>/N_e
  Scalar absolute;     // <n>
};

// <n> = g2*gamma_perp*N_e / ((2 kappa + gamma_perp) c)
template <typename Scalar>
PhotonNumber<Scalar> photon_number(const SystemParams<Scalar>& p, Scalar inversion) {
  detail::require_below_threshold(p, inversion);
  const Scalar b = damping_sum(p);
  const Scalar c = gain_margin(p, inversion);
  const Scalar per_excited = p.g2 * p.gamma_perp / (Scalar(2) * b * c);
  return {per_excited, per_excited * excited_population(p, inversion)};
}

template <typename Scalar>
struct Correlations {
  Scalar vv;         // <v^dagger v>/f
  Scalar d_corr;     // <D> = <v^dagger v>/f - N_e
  Scalar coherence;  // C = <D>/N_e, independent of N_e
};

template <typename Scalar>
Scalar coherence(const SystemParams<Scalar>& p, Scalar inversion) {
  detail::require_below_threshold(p, inversion);
  const Scalar b = damping_sum(p);
  const Scalar c = gain_margin(p, inversion);
  return p.gamma_perp * (c + p.kappa * p.kappa) / (Scalar(2) * b * c) - Scalar(1);
}

template <typename Scalar>
Correlations<Scalar> inter_emitter_correlation(const SystemParams<Scalar>& p,
                                               Scalar inversion) {
  const Scalar c_param = coherence(p, inversion);
  const Scalar ne = excited_population(p, inversion);
  const Scalar vv = (c_param + Scalar(1)) * ne;
  return {vv, vv - ne, c_param};
}

// C at zero pump (N = -N0); its minimum over the pump axis.
template <typename Scalar>
Scalar coherence_floor(const SystemParams<Scalar>& p) {
  return coherence(p, -p.n0());
}

// Population balance gamma_par*(P N_g - N_e) = 2 kappa <n>, solved for P.
template <typename Scalar>
Scalar pump_for_inversion(const SystemParams<Scalar>& p, Scalar inversion) {
  if (!(inversion > -p.n0() && inversion < max_inversion(p)))
    throw Error(ErrorCode::DomainError,
                "inversion " + std::to_string(static_cast<double>(inversion)) +
                    " outside (-N0, min(N0, N_th))");
  const Scalar n = photon_number(p, inversion).absolute;
  const Scalar flux = Scalar(2) * p.kappa * n / p.gamma_par;
  return (excited_population(p, inversion) + flux) / ground_population(p, inversion);
}

template <typename Scalar>
struct SteadyState {
  Scalar pump{};
  Scalar inversion{};
  Scalar n_excited{};
  Scalar n_ground{};
  Scalar photons{};
  Scalar sigma{};  // Omega0*<Sigma>, equal to 2*kappa*<n>
  Scalar vv{};     // <v^dagger v>/f
  Scalar d_corr{};
  Scalar coherence{};
};

template <typename Scalar>
SteadyState<Scalar> state_at_inversion(const SystemParams<Scalar>& p, Scalar inversion,
                                       Scalar pump) {
  SteadyState<Scalar> s;
  s.pump = pump;
  s.inversion = inversion;
  s.n_excited = excited_population(p, inversion);
  s.n_ground = ground_population(p, inversion);
  s.photons = photon_number(p, inversion).absolute;
  s.sigma = Scalar(2) * p.kappa * s.photons;
  const auto corr = inter_emitter_correlation(p, inversion);
  s.vv = corr.vv;
  s.d_corr = corr.d_corr;
  s.coherence = corr.coherence;
  return s;
}

// Unique inversion with pump_for_inversion(N) == pump. Bisection on the open
// interval (-N0, min(N0, N_th)); the upper end is a pole of P(N) and is
// never evaluated.
template <typename Scalar>
Scalar inversion_for_pump(const SystemParams<Scalar>& p, Scalar pump) {
  make_pump(pump);
  if (pump == Scalar(0)) return -p.n0();

  Scalar lo = -p.n0();
  Scalar hi = max_inversion(p);
  for (int iter = 0; iter < 4096; ++iter) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (!(mid > lo && mid < hi)) return mid;
    const Scalar residual = pump_for_inversion(p, mid) - pump;
    if (!std::isfinite(static_cast<double>(residual)))
      throw Error(ErrorCode::ConvergenceFailure, "non-finite pump residual");
    if (residual < Scalar(0)) lo = mid;
    else if (residual > Scalar(0)) hi = mid;
    else return mid;
  }
  throw Error(ErrorCode::ConvergenceFailure, "inversion bisection did not terminate");
}

template <typename Scalar>
SteadyState<Scalar> solve_steady_state(const SystemParams<Scalar>& p, Scalar pump) {
  make_pump(pump);
  if (pump == Scalar(0)) {
    SteadyState<Scalar> s;
    s.pump = Scalar(0);
    s.inversion = -p.n0();
    s.n_excited = Scalar(0);
    s.n_ground = p.n0();
    s.photons = Scalar(0);
    s.sigma = Scalar(0);
    s.vv = Scalar(0);
    s.d_corr = Scalar(0);
    s.coherence = coherence_floor(p);
    return s;
  }
  return state_at_inversion(p, inversion_for_pump(p, pump), pump);
}

}  // namespace rabisplit

#endif  // RABISPLIT_STEADY_STATE_HPP
