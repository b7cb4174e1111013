#include "rabisplit/params.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

namespace rabisplit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key, int line) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidConfig,
                "line " + std::to_string(line) + ": bad value for '" +
                    std::string(key) + "'");
  return value;
}

}  // namespace

ParamInput parse_config(std::istream& in) {
  ParamInput out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (auto hash = text.find('#'); hash != std::string_view::npos)
      text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig,
                  "line " + std::to_string(line) + ": expected key=value");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));

    if (key == "g2") out.g2 = parse_number<double>(value, key, line);
    else if (key == "kappa") out.kappa = parse_number<double>(value, key, line);
    else if (key == "two_kappa") out.two_kappa = parse_number<double>(value, key, line);
    else if (key == "gamma_perp") out.gamma_perp = parse_number<double>(value, key, line);
    else if (key == "gamma_par") out.gamma_par = parse_number<double>(value, key, line);
    else if (key == "n_emitters") out.n_emitters = parse_number<long>(value, key, line);
    else if (key == "photon_energy") out.photon_energy = parse_number<double>(value, key, line);
    else
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line) +
                                                ": unknown key '" + std::string(key) + "'");
  }
  if (out.kappa && out.two_kappa)
    throw Error(ErrorCode::InvalidConfig, "kappa and two_kappa are mutually exclusive");
  return out;
}

ParamInput parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config file '" + path + "'");
  return parse_config(in);
}

ParamInput merge(ParamInput base, const ParamInput& o) {
  if (o.g2) base.g2 = o.g2;
  // a cavity rate given on the command line replaces either spelling in the file
  if (o.kappa || o.two_kappa) {
    base.kappa = o.kappa;
    base.two_kappa = o.two_kappa;
  }
  if (o.gamma_perp) base.gamma_perp = o.gamma_perp;
  if (o.gamma_par) base.gamma_par = o.gamma_par;
  if (o.n_emitters) base.n_emitters = o.n_emitters;
  if (o.photon_energy) base.photon_energy = o.photon_energy;
  return base;
}

Params resolve(const ParamInput& input, std::vector<std::string>* notes) {
  if (input.kappa && input.two_kappa)
    throw Error(ErrorCode::InvalidConfig, "kappa and two_kappa are mutually exclusive");
  if (!input.g2) throw Error(ErrorCode::InvalidConfig, "missing g2");
  if (!input.kappa && !input.two_kappa)
    throw Error(ErrorCode::InvalidConfig, "missing kappa (or two_kappa)");
  if (!input.gamma_perp) throw Error(ErrorCode::InvalidConfig, "missing gamma_perp");
  if (!input.n_emitters) throw Error(ErrorCode::InvalidConfig, "missing n_emitters");

  Params raw;
  raw.g2 = *input.g2;
  if (input.two_kappa) {
    raw.kappa = *input.two_kappa / 2.0;
    if (notes)
      notes->push_back("cavity given as two_kappa (energy decay rate); kappa = two_kappa/2 = " +
                       std::to_string(raw.kappa));
  } else {
    raw.kappa = *input.kappa;
    if (notes) notes->push_back("cavity given as kappa (field amplitude decay rate)");
  }
  raw.gamma_perp = *input.gamma_perp;
  raw.gamma_par = input.gamma_par.value_or(1.0);
  raw.n_emitters = *input.n_emitters;
  raw.photon_energy = input.photon_energy;
  return validate(raw, notes);
}

}  // namespace rabisplit
