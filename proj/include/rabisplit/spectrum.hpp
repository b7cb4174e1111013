#ifndef RABISPLIT_SPECTRUM_HPP
#define RABISPLIT_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "rabisplit/linewidth.hpp"
#include "rabisplit/params.hpp"
#include "rabisplit/quadrature.hpp"
#include "rabisplit/steady_state.hpp"

namespace rabisplit {

// Frequencies are offsets from the cavity resonance, in units of gamma_par.
// Spectra are normalized so that <n> = int n(w) dw/(2 pi).

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct Roots {
  std::complex<Scalar> plus;
  std::complex<Scalar> minus;
};

// w+- = -i(2 kappa + gamma_perp)/4 +- i sqrt((2 kappa - gamma_perp)^2/16 + g2 N)
// with the principal complex square root: when the radicand is negative,
// w+ = -|s| - i(...) and w- = +|s| - i(...).
template <typename Scalar>
Roots<Scalar> roots(const SystemParams<Scalar>& p, Scalar inversion) {
  using Complex = std::complex<Scalar>;
  const Complex i(0, 1);
  const Scalar detune = Scalar(2) * p.kappa - p.gamma_perp;
  const Scalar radicand = detune * detune / Scalar(16) + p.g2 * inversion;
  const Complex root = std::sqrt(Complex(radicand, Scalar(0)));
  const Complex centre = -i * (Scalar(2) * p.kappa + p.gamma_perp) / Scalar(4);
  return {centre + i * root, centre - i * root};
}

// Inversion N_E where the root radicand vanishes (degenerate roots).
template <typename Scalar>
Scalar eigenmode_split_inversion(const SystemParams<Scalar>& p) {
  const Scalar detune = Scalar(2) * p.kappa - p.gamma_perp;
  return -detune * detune / (Scalar(16) * p.g2);
}

// Inversion N_c below which the spectrum has two resolved peaks.
template <typename Scalar>
Scalar critical_inversion(const SystemParams<Scalar>& p) {
  return -(Scalar(4) * p.kappa * p.kappa + p.gamma_perp * p.gamma_perp) / (Scalar(8) * p.g2);
}

// n(w) = g2 gamma_perp N_e / ((w^2 - c)^2 + b^2 w^2)
template <typename Scalar>
Scalar spectral_density(const SystemParams<Scalar>& p, Scalar inversion, Scalar omega) {
  const Scalar b = damping_sum(p);
  const Scalar c = gain_margin(p, inversion);
  const Scalar w2 = omega * omega;
  const Scalar shifted = w2 - c;
  return p.g2 * p.gamma_perp * excited_population(p, inversion) /
         (shifted * shifted + b * b * w2);
}

// Same spectrum written through the complex roots.
template <typename Scalar>
Scalar spectral_density_from_roots(const SystemParams<Scalar>& p, Scalar inversion,
                                   Scalar omega) {
  const auto r = roots(p, inversion);
  const std::complex<Scalar> w2(omega * omega, Scalar(0));
  const auto denom = (w2 - r.plus * r.plus) * (w2 - r.minus * r.minus);
  return p.g2 * p.gamma_perp * excited_population(p, inversion) / denom.real();
}

// Spectrum of the collective polarization, <v^dagger v>/f per unit dw/(2 pi).
template <typename Scalar>
Scalar polarization_density(const SystemParams<Scalar>& p, Scalar inversion, Scalar omega) {
  return (p.kappa * p.kappa + omega * omega) / p.g2 * spectral_density(p, inversion, omega);
}

// Maxima of n(w) from dn/dw = 0: +-sqrt(c - b^2/2) when c > b^2/2, else w = 0.
// These are not Re(w+-); e.g. 108.42 vs 117.29 for g2=100, kappa=80,
// gamma_perp=19 at N=-150.
template <typename Scalar>
std::vector<Scalar> peak_positions(const SystemParams<Scalar>& p, Scalar inversion) {
  detail::require_below_threshold(p, inversion);
  const Scalar b = damping_sum(p);
  const Scalar excess = gain_margin(p, inversion) - b * b / Scalar(2);
  if (excess > Scalar(0)) {
    const Scalar w = std::sqrt(excess);
    return {-w, w};
  }
  return {Scalar(0)};
}

template <typename Scalar>
Scalar splitting(const SystemParams<Scalar>& p, Scalar inversion) {
  const auto peaks = peak_positions(p, inversion);
  return peaks.size() == 2 ? peaks[1] - peaks[0] : Scalar(0);
}

// Splitting at zero pump, where it is largest:
// 2 sqrt(kappa gamma_perp/2 + g2 N0 - (2 kappa + gamma_perp)^2/8), or 0.
template <typename Scalar>
Scalar max_splitting(const SystemParams<Scalar>& p) {
  const Scalar sum = Scalar(2) * p.kappa + p.gamma_perp;
  const Scalar arg = p.kappa * p.gamma_perp / Scalar(2) + p.g2 * p.n0() - sum * sum / Scalar(8);
  return arg > Scalar(0) ? Scalar(2) * std::sqrt(arg) : Scalar(0);
}

// int n(w) dw/(2 pi) by adaptive quadrature on (-W, W). W is grown until the
// analytic tail bound 4A/(3 pi W^3) (from n <= 4A/w^4 for w^2 >= 2c) is
// below tail_tol relative to the computed integral.
template <typename Scalar>
QuadratureResult<Scalar> integrate_density(const SystemParams<Scalar>& p, Scalar inversion,
                                           Scalar (*density)(const SystemParams<Scalar>&,
                                                             Scalar, Scalar),
                                           Scalar numerator_scale, Scalar rel_tol = Scalar(1e-11),
                                           Scalar tail_tol = Scalar(1e-10)) {
  detail::require_below_threshold(p, inversion);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar b = damping_sum(p);
  const Scalar c = gain_margin(p, inversion);

  std::vector<Scalar> breaks{Scalar(0)};
  Scalar scale = std::min(c / b, std::sqrt(c));
  const Scalar excess = c - b * b / Scalar(2);
  const Scalar peak = excess > Scalar(0) ? std::sqrt(excess) : Scalar(0);
  Scalar width = std::max({Scalar(2) * std::sqrt(Scalar(2) * c), Scalar(20) * b, Scalar(4) * peak});

  auto f = [&](Scalar w) { return density(p, inversion, w); };
  QuadratureResult<Scalar> half{};
  for (int grow = 0; grow < 60; ++grow) {
    breaks.assign(1, Scalar(0));
    for (Scalar x = scale; x < width; x *= Scalar(2)) breaks.push_back(x);
    if (peak > Scalar(0)) breaks.push_back(peak);
    breaks.push_back(width);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    half = integrate_adaptive(f, breaks, rel_tol);
    const Scalar tail = Scalar(4) * numerator_scale / (Scalar(3) * pi * width * width * width);
    if (tail <= tail_tol * (half.value / pi)) break;
    width *= Scalar(4);
  }
  // symmetric integrand: 2 * int_0^W / (2 pi)
  return {half.value / pi, half.error / pi, half.intervals};
}

template <typename Scalar>
QuadratureResult<Scalar> integrate_spectrum(const SystemParams<Scalar>& p, Scalar inversion) {
  const Scalar numerator = p.g2 * p.gamma_perp * excited_population(p, inversion);
  return integrate_density<Scalar>(p, inversion, &spectral_density<Scalar>, numerator);
}

// <v^dagger v>/f by quadrature. The (kappa^2 + w^2) factor makes the tail
// decay only as w^-2, so the half line is mapped onto [0, 1).
template <typename Scalar>
QuadratureResult<Scalar> integrate_polarization(const SystemParams<Scalar>& p,
                                                Scalar inversion) {
  detail::require_below_threshold(p, inversion);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar numerator = p.gamma_perp * excited_population(p, inversion);
  const Scalar b = damping_sum(p);
  const Scalar c = gain_margin(p, inversion);
  const Scalar excess = c - b * b / Scalar(2);
  const Scalar peak = excess > Scalar(0) ? std::sqrt(excess) : Scalar(0);
  // Map w in [0, inf) to t in [0, 1): w = s t/(1-t); the transformed
  // integrand stays finite at t -> 1 since the density decays as w^-2.
  const Scalar s = std::max({std::sqrt(c), b, peak});
  auto f = [&](Scalar t) {
    if (t >= Scalar(1)) return numerator / s;  // limit of density * dw/dt
    const Scalar one_minus = Scalar(1) - t;
    const Scalar w = s * t / one_minus;
    const Scalar jac = s / (one_minus * one_minus);
    return polarization_density(p, inversion, w) * jac;
  };
  std::vector<Scalar> breaks{Scalar(0)};
  for (Scalar t = Scalar(1) / Scalar(64); t < Scalar(1); t *= Scalar(2)) breaks.push_back(t);
  if (peak > Scalar(0)) breaks.push_back(peak / (peak + s));
  breaks.push_back(Scalar(1));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto half = integrate_adaptive(f, breaks, Scalar(1e-12));
  return {half.value / pi, half.error / pi, half.intervals};
}

// Grid half-width resolving both split peaks and broad single peaks.
template <typename Scalar>
Scalar default_grid_halfwidth(const SystemParams<Scalar>& p, Scalar inversion) {
  const Scalar r = linewidth_parameter(p, inversion);
  const Scalar width = r <= Scalar(1) ? fwhm_from_parameter(p, r) : damping_sum(p);
  return std::max(Scalar(6) * width, Scalar(1.5) * max_splitting(p));
}

inline constexpr Eigen::Index kDefaultGridPoints = 2001;

template <typename Scalar = double>
VectorX<Scalar> symmetric_grid(Scalar halfwidth, Eigen::Index points = kDefaultGridPoints) {
  VectorX<Scalar> grid = VectorX<Scalar>::LinSpaced(points, -halfwidth, halfwidth);
  // mirror exactly so that grid(i) == -grid(n-1-i)
  for (Eigen::Index i = 0; i < points / 2; ++i) grid(points - 1 - i) = -grid(i);
  if (points % 2) grid(points / 2) = Scalar(0);
  return grid;
}

template <typename Scalar>
struct SpectrumAnalysis {
  Roots<Scalar> roots;
  std::vector<Scalar> peak_positions;
  Scalar splitting{};
  VectorX<Scalar> omega;
  VectorX<Scalar> density;
  Scalar total_photons{};
  Scalar quadrature_error{};
};

template <typename Scalar, typename Derived>
SpectrumAnalysis<Scalar> evaluate(const SystemParams<Scalar>& p, const SteadyState<Scalar>& state,
                                  const Eigen::DenseBase<Derived>& grid) {
  detail::require_below_threshold(p, state.inversion);
  SpectrumAnalysis<Scalar> out;
  out.roots = roots(p, state.inversion);
  out.peak_positions = peak_positions(p, state.inversion);
  out.splitting = splitting(p, state.inversion);
  out.omega = grid.template cast<Scalar>();
  out.density = out.omega.unaryExpr(
      [&](Scalar w) { return spectral_density(p, state.inversion, w); });
  const auto total = integrate_spectrum(p, state.inversion);
  out.total_photons = total.value;
  out.quadrature_error = total.error;
  return out;
}

}  // namespace rabisplit

#endif  // RABISPLIT_SPECTRUM_HPP
