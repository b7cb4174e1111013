#ifndef RABISPLIT_LANGEVIN_HPP
#define RABISPLIT_LANGEVIN_HPP

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "rabisplit/params.hpp"
#include "rabisplit/steady_state.hpp"

namespace rabisplit {

// Normal-ordered Langevin diffusion coefficients for the linearized
// field/polarization equations with the inversion frozen at its mean. Only
// the polarization is driven; in units where the polarization is scaled by
// Omega0 its strength is g2 * gamma_perp * N_e.
struct NoiseModel {
  double polarization{};  // <F_v^dagger F_v>, scaled
  double field{};         // <F_a^dagger F_a>, vacuum input
  double cross{};         // <F_a^dagger F_v>
};

NoiseModel noise_model(const Params& p, const SteadyState<double>& state);

enum class Window { Flat, Hann };

constexpr std::string_view to_string(Window w) {
  return w == Window::Flat ? "flat" : "hann";
}

struct OracleOptions {
  double dt{};            // Euler-Maruyama step
  double t_total{};       // recorded time per trajectory, after burn-in
  int n_traj{200};
  std::uint64_t seed{42};
  int segments{8};        // periodogram segments per trajectory
  Window window{Window::Flat};
};

struct OracleEstimate {
  Eigen::VectorXd omega;      // ascending bin frequencies
  Eigen::VectorXd psd;        // ensemble-mean periodogram, estimates n(w)
  Eigen::VectorXd std_error;  // per-bin standard error over trajectories
  Eigen::VectorXd trajectory_photons;  // per-trajectory integral of its periodogram
  int n_traj{};
  int segments{};
  double dt{};
  double t_total{};
  double burn_in{};
  std::uint64_t seed{};
  Window window{Window::Flat};
};

// Largest rate entering the drift; dt * max_drift_rate must stay below 0.1.
double max_drift_rate(const Params& p, double inversion);

inline constexpr double kMaxStepRate = 0.1;
inline constexpr double kDefaultStepRate = 0.002;

double default_step(const Params& p, double inversion);

// 10 / min |Im w+-|.
double burn_in_time(const Params& p, double inversion);

// Integrates the linear stochastic field/polarization equations per
// trajectory and averages segment periodograms of a(t). Trajectory k uses
// an engine seeded from (seed, k), so results do not depend on the thread
// count. Throws UnstableSystem if any Im w+- >= 0 and StepTooLarge if the
// step guard fails.
OracleEstimate simulate_spectrum(const Params& p, const SteadyState<double>& state,
                                 const OracleOptions& options);

struct PhotonEstimate {
  double mean{};
  double std_error{};
};

// Trapezoidal integral of the estimate over dw/(2 pi); the standard error is
// taken from the spread of the per-trajectory integrals.
PhotonEstimate estimate_photon_number(const OracleEstimate& estimate);

}  // namespace rabisplit

#endif  // RABISPLIT_LANGEVIN_HPP
