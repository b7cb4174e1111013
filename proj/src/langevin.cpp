#include "rabisplit/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "rabisplit/error.hpp"
#include "rabisplit/parallel.hpp"
#include "rabisplit/spectrum.hpp"

namespace rabisplit {

namespace {

using Complex = std::complex<double>;

// Smallest n' >= n of the form 2^a 3^b 5^c, so the FFT stays fast.
Eigen::Index smooth_size(Eigen::Index n) {
  for (Eigen::Index m = std::max<Eigen::Index>(n, 2);; ++m) {
    Eigen::Index r = m;
    for (Eigen::Index f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

struct Trajectory {
  Eigen::VectorXd periodogram;  // ascending-frequency order
  double photons{};
};

double trapezoid(const Eigen::VectorXd& y, double step) {
  if (y.size() < 2) return 0.0;
  return step * (y.sum() - 0.5 * (y(0) + y(y.size() - 1)));
}

}  // namespace

NoiseModel noise_model(const Params& p, const SteadyState<double>& state) {
  return {p.g2 * p.gamma_perp * state.n_excited, 0.0, 0.0};
}

double max_drift_rate(const Params& p, double inversion) {
  return std::max({p.kappa, p.gamma_perp / 2.0, std::sqrt(p.g2 * std::abs(inversion))});
}

double default_step(const Params& p, double inversion) {
  return kDefaultStepRate / max_drift_rate(p, inversion);
}

double burn_in_time(const Params& p, double inversion) {
  const auto r = roots(p, inversion);
  return 10.0 / std::min(std::abs(r.plus.imag()), std::abs(r.minus.imag()));
}

OracleEstimate simulate_spectrum(const Params& p, const SteadyState<double>& state,
                                 const OracleOptions& opt) {
  const double inversion = state.inversion;
  const auto r = roots(p, inversion);
  if (!(r.plus.imag() < 0.0 && r.minus.imag() < 0.0))
    throw Error(ErrorCode::UnstableSystem,
                "linearized field/polarization dynamics are not damped at this inversion");
  if (!(opt.dt > 0.0) || !(opt.t_total > 0.0) || opt.n_traj < 1 || opt.segments < 1)
    throw Error(ErrorCode::DomainError, "dt, t_total, n_traj and segments must be positive");
  if (!(opt.dt * max_drift_rate(p, inversion) < kMaxStepRate))
    throw Error(ErrorCode::StepTooLarge,
                "dt * max(kappa, gamma_perp/2, g sqrt|N|) must be < " + std::to_string(kMaxStepRate));

  const Eigen::Index seg_len =
      smooth_size(static_cast<Eigen::Index>(std::llround(opt.t_total / opt.segments / opt.dt)));
  const double seg_time = static_cast<double>(seg_len) * opt.dt;
  const double burn_in = burn_in_time(p, inversion);
  const auto burn_steps = static_cast<long>(std::ceil(burn_in / opt.dt));
  const double d_omega = 2.0 * std::numbers::pi / seg_time;

  Eigen::VectorXd window = Eigen::VectorXd::Ones(seg_len);
  if (opt.window == Window::Hann) {
    for (Eigen::Index j = 0; j < seg_len; ++j)
      window(j) = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(j) / double(seg_len)));
  }
  const double window_power = window.squaredNorm() / double(seg_len);
  const double scale = opt.dt * opt.dt / (seg_time * window_power) / opt.segments;

  OracleEstimate out;
  out.omega.resize(seg_len);
  const Eigen::Index half = seg_len / 2;
  for (Eigen::Index k = 0; k < seg_len; ++k) out.omega(k) = double(k - half) * d_omega;

  const double drive = std::sqrt(noise_model(p, state).polarization * opt.dt / 2.0);
  const double kappa = p.kappa, gp2 = p.gamma_perp / 2.0, coupling = p.g2 * inversion;

  auto run = [&](int traj) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(traj)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::FFT<double> fft;

    Complex a(0.0, 0.0), u(0.0, 0.0);  // u = Omega0 * v
    auto step = [&] {
      const Complex xi(normal(engine), normal(engine));
      const Complex a_next = a + opt.dt * (u - kappa * a);
      u += opt.dt * (-gp2 * u + coupling * a) + drive * xi;
      a = a_next;
    };
    for (long s = 0; s < burn_steps; ++s) step();

    Trajectory t;
    t.periodogram = Eigen::VectorXd::Zero(seg_len);
    std::vector<Complex> buffer(static_cast<std::size_t>(seg_len)), spectrum;
    for (int seg = 0; seg < opt.segments; ++seg) {
      for (Eigen::Index j = 0; j < seg_len; ++j) {
        buffer[static_cast<std::size_t>(j)] = window(j) * a;
        step();
      }
      fft.fwd(spectrum, buffer);
      // fwd uses exp(-i w t); n(w) pairs with exp(+i w t), i.e. bin -k.
      for (Eigen::Index k = 0; k < seg_len; ++k) {
        const Eigen::Index m = k - half;
        const Eigen::Index idx = ((-m) % seg_len + seg_len) % seg_len;
        t.periodogram(k) += std::norm(spectrum[static_cast<std::size_t>(idx)]) * scale;
      }
    }
    t.photons = trapezoid(t.periodogram, d_omega) / (2.0 * std::numbers::pi);
    return t;
  };

  // Trajectories run in parallel blocks and are folded in index order, so
  // the result is bit-identical for any thread count.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(seg_len);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(seg_len);
  out.trajectory_photons.resize(opt.n_traj);
  const int block = static_cast<int>(std::max(1u, thread_count()) * 4);
  std::vector<Trajectory> results;
  int done = 0;
  for (int start = 0; start < opt.n_traj; start += block) {
    const int count = std::min(block, opt.n_traj - start);
    results.assign(static_cast<std::size_t>(count), {});
    parallel_for(static_cast<std::size_t>(count),
                 [&](std::size_t i) { results[i] = run(start + static_cast<int>(i)); });
    for (const auto& t : results) {
      ++done;
      const Eigen::VectorXd delta = t.periodogram - mean;
      mean += delta / double(done);
      m2.array() += delta.array() * (t.periodogram - mean).array();
      out.trajectory_photons(done - 1) = t.photons;
    }
  }

  out.psd = mean;
  out.std_error = opt.n_traj > 1
                      ? Eigen::VectorXd((m2 / double(opt.n_traj - 1) / double(opt.n_traj)).cwiseSqrt())
                      : Eigen::VectorXd::Zero(seg_len);
  out.n_traj = opt.n_traj;
  out.segments = opt.segments;
  out.dt = opt.dt;
  out.t_total = seg_time * opt.segments;
  out.burn_in = burn_in;
  out.seed = opt.seed;
  out.window = opt.window;
  return out;
}

PhotonEstimate estimate_photon_number(const OracleEstimate& e) {
  if (e.omega.size() < 2) return {};
  const double step = e.omega(1) - e.omega(0);
  PhotonEstimate out;
  out.mean = trapezoid(e.psd, step) / (2.0 * std::numbers::pi);
  const auto n = e.trajectory_photons.size();
  if (n > 1) {
    const double m = e.trajectory_photons.mean();
    const double var = (e.trajectory_photons.array() - m).square().sum() / double(n - 1);
    out.std_error = std::sqrt(var / double(n));
  }
  return out;
}

}  // namespace rabisplit
