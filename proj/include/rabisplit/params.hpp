#ifndef RABISPLIT_PARAMS_HPP
#define RABISPLIT_PARAMS_HPP

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rabisplit/error.hpp"

namespace rabisplit {

// One device: N0 identical two-level emitters in a single-mode cavity with
// zero detuning. All rates are in units of the population decay rate
// gamma_par once validated (gamma_par == 1).
template <typename Scalar>
struct SystemParams {
  Scalar g2{};          // squared effective coupling, units gamma_par^2
  Scalar kappa{};       // cavity field amplitude decay; energy decay is 2*kappa
  Scalar gamma_perp{};  // polarization decay
  Scalar gamma_par{1};  // population decay
  long n_emitters{0};
  std::optional<Scalar> photon_energy;  // hbar*omega0, user units

  Scalar n0() const { return static_cast<Scalar>(n_emitters); }
};

using Params = SystemParams<double>;

template <typename Scalar>
struct PumpPoint {
  Scalar pump{};
};

template <typename Scalar>
PumpPoint<Scalar> make_pump(Scalar pump) {
  if (!(pump >= Scalar(0)) || !std::isfinite(static_cast<double>(pump)))
    throw Error(ErrorCode::DomainError, "pump must be finite and >= 0");
  return {pump};
}

namespace detail {
template <typename Scalar>
void require_positive_rate(Scalar value, const char* name) {
  if (!(value > Scalar(0)) || !std::isfinite(static_cast<double>(value)))
    throw Error(ErrorCode::NonPositiveRate,
                std::string(name) + " must be a finite positive rate");
}
}  // namespace detail

// Checks the invariants and returns the parameter set normalized to
// gamma_par = 1. Warnings (not errors) are appended to `warnings` if given.
template <typename Scalar>
SystemParams<Scalar> validate(const SystemParams<Scalar>& raw,
                              std::vector<std::string>* warnings = nullptr) {
  detail::require_positive_rate(raw.g2, "g2");
  detail::require_positive_rate(raw.kappa, "kappa");
  detail::require_positive_rate(raw.gamma_perp, "gamma_perp");
  detail::require_positive_rate(raw.gamma_par, "gamma_par");
  if (raw.n_emitters < 1)
    throw Error(ErrorCode::ZeroEmitters, "n_emitters must be >= 1");
  if (raw.photon_energy)
    detail::require_positive_rate(*raw.photon_energy, "photon_energy");

  if (warnings && raw.n_emitters < 10)
    warnings->push_back("n_emitters = " + std::to_string(raw.n_emitters) +
                        " < 10; the model assumes N0 >> 1");

  SystemParams<Scalar> out = raw;
  if (raw.gamma_par != Scalar(1)) {
    out.kappa = raw.kappa / raw.gamma_par;
    out.gamma_perp = raw.gamma_perp / raw.gamma_par;
    out.g2 = raw.g2 / (raw.gamma_par * raw.gamma_par);
    out.gamma_par = Scalar(1);
    if (warnings)
      warnings->push_back("rates renormalized to gamma_par = 1");
  }
  return out;
}

// Re-dimensionalizes with a rate scale `lambda` (g2 scales as lambda^2).
template <typename Scalar>
SystemParams<Scalar> rescaled(const SystemParams<Scalar>& p, Scalar lambda) {
  SystemParams<Scalar> out = p;
  out.kappa *= lambda;
  out.gamma_perp *= lambda;
  out.gamma_par *= lambda;
  out.g2 *= lambda * lambda;
  return out;
}

// Loosely-typed parameter input as read from flags or a key=value file.
// Either kappa or two_kappa may be given, never both.
struct ParamInput {
  std::optional<double> g2;
  std::optional<double> kappa;
  std::optional<double> two_kappa;
  std::optional<double> gamma_perp;
  std::optional<double> gamma_par;
  std::optional<long> n_emitters;
  std::optional<double> photon_energy;
};

// Parses "key=value" lines. Blank lines and '#' comments are skipped.
// Throws Error(InvalidConfig) on unknown keys or malformed values.
ParamInput parse_config(std::istream& in);
ParamInput parse_config_file(const std::string& path);

// Fields set in `override_with` replace those in `base`.
ParamInput merge(ParamInput base, const ParamInput& override_with);

// Builds and validates a parameter set. Notes on unit handling (two_kappa
// conversion, renormalization, small N0) are appended to `notes`.
Params resolve(const ParamInput& input, std::vector<std::string>* notes = nullptr);

}  // namespace rabisplit

#endif  // RABISPLIT_PARAMS_HPP
