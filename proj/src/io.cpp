#include "rabisplit/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace rabisplit::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

nlohmann::json params_json(const Params& p) {
  nlohmann::json j{{"g2", p.g2},
                   {"kappa", p.kappa},
                   {"two_kappa", 2.0 * p.kappa},
                   {"gamma_perp", p.gamma_perp},
                   {"gamma_par", p.gamma_par},
                   {"n_emitters", p.n_emitters}};
  j["photon_energy"] = p.photon_energy ? nlohmann::json(*p.photon_energy) : nlohmann::json();
  return j;
}

std::string steady_csv(const std::vector<SteadyState<double>>& states) {
  std::ostringstream out;
  out << "pump,inversion,n_excited,n_ground,photons,sigma,vv,d_corr,coherence\n";
  for (const auto& s : states) {
    out << format_number(s.pump) << ',' << format_number(s.inversion) << ','
        << format_number(s.n_excited) << ',' << format_number(s.n_ground) << ','
        << format_number(s.photons) << ',' << format_number(s.sigma) << ','
        << format_number(s.vv) << ',' << format_number(s.d_corr) << ','
        << format_number(s.coherence) << '\n';
  }
  return out.str();
}

std::string spectrum_csv(const SpectrumAnalysis<double>& s, bool normalized) {
  const double peak = s.density.size() ? s.density.maxCoeff() : 1.0;
  const double scale = normalized && peak > 0 ? 1.0 / peak : 1.0;
  std::ostringstream out;
  out << "omega,n_omega\n";
  for (Eigen::Index i = 0; i < s.omega.size(); ++i)
    out << format_number(s.omega(i)) << ',' << format_number(s.density(i) * scale) << '\n';
  return out.str();
}

namespace {
nlohmann::json complex_json(const std::complex<double>& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}
nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}
}  // namespace

nlohmann::json spectrum_json(const Params& p, const SteadyState<double>& state,
                             const SpectrumAnalysis<double>& s, bool normalized) {
  nlohmann::json j;
  j["params"] = params_json(p);
  j["pump"] = state.pump;
  j["inversion"] = state.inversion;
  j["photons_closed_form"] = state.photons;
  j["photons_quadrature"] = s.total_photons;
  j["quadrature_error"] = s.quadrature_error;
  j["roots"] = {{"plus", complex_json(s.roots.plus)}, {"minus", complex_json(s.roots.minus)}};
  j["peak_positions"] = s.peak_positions;
  j["splitting"] = s.splitting;
  j["grid"] = {{"points", s.omega.size()},
               {"halfwidth", s.omega.size() ? s.omega(s.omega.size() - 1) : 0.0}};
  j["normalized"] = normalized;
  j["axis"] = "omega - omega0 (gamma_par)";
  j["normalization"] = kSpectrumNote;
  return j;
}

nlohmann::json regime_json(const RegimeReport<double>& r) {
  nlohmann::json j;
  j["n_th"] = r.inversions.threshold;
  j["n_c"] = r.inversions.critical;
  j["n_e_split"] = r.inversions.eigenmode;
  j["p_c"] = optional_json(r.pumps.p_c);
  j["p_e"] = optional_json(r.pumps.p_e);
  j["p_st"] = optional_json(r.pumps.p_st);
  j["led"] = r.pumps.led;
  j["cond_spectral_split"] = r.conditions.spectral;
  j["cond_eigenmode_split"] = r.conditions.eigenmode;
  j["region"] = r.region ? nlohmann::json(std::string(to_string(*r.region))) : nlohmann::json();
  j["p_st_definition"] = kStimulatedNote;
  return j;
}

std::string phase_diagram_csv(const PhaseDiagram<double>& d) {
  std::ostringstream out;
  out << "g2,p_st,p_c,p_e\n";
  for (const auto& row : d.rows)
    out << format_number(row.g2) << ',' << format_optional(row.pumps.p_st) << ','
        << format_optional(row.pumps.p_c) << ',' << format_optional(row.pumps.p_e) << '\n';
  return out.str();
}

std::string coherence_map_csv(const CoherenceMap<double>& m) {
  std::ostringstream out;
  out << "two_kappa,gamma_perp,abs_c0,omega_max\n";
  for (const auto& c : m.cells)
    out << format_number(c.two_kappa) << ',' << format_number(c.gamma_perp) << ','
        << format_number(c.abs_c0) << ',' << format_number(c.omega_max) << '\n';
  return out.str();
}

std::string contour_csv(const std::vector<MapPoint<double>>& contour) {
  std::ostringstream out;
  out << "two_kappa,gamma_perp\n";
  for (const auto& q : contour)
    out << format_number(q.two_kappa) << ',' << format_number(q.gamma_perp) << '\n';
  return out.str();
}

std::string linewidth_csv(const std::vector<LinewidthPoint<double>>& points) {
  std::ostringstream out;
  out << "pump,inversion,photons,r,fwhm,fwhm_asymptotic,split_flag\n";
  for (const auto& pt : points)
    out << format_number(pt.pump) << ',' << format_number(pt.inversion) << ','
        << format_number(pt.photons) << ',' << format_number(pt.r) << ','
        << format_optional(pt.fwhm) << ',' << format_number(pt.fwhm_asymptotic) << ','
        << (pt.split() ? 1 : 0) << '\n';
  return out.str();
}

std::string oracle_csv(const OracleEstimate& e) {
  std::ostringstream out;
  out << "omega,psd,stderr\n";
  for (Eigen::Index i = 0; i < e.omega.size(); ++i)
    out << format_number(e.omega(i)) << ',' << format_number(e.psd(i)) << ','
        << format_number(e.std_error(i)) << '\n';
  return out.str();
}

nlohmann::json oracle_json(const OracleEstimate& e) {
  const auto n = estimate_photon_number(e);
  return {{"seed", e.seed},
          {"dt", e.dt},
          {"t_total", e.t_total},
          {"n_traj", e.n_traj},
          {"segments", e.segments},
          {"burn_in", e.burn_in},
          {"window", std::string(to_string(e.window))},
          {"bins", e.omega.size()},
          {"photons", n.mean},
          {"photons_stderr", n.std_error},
          {"normalization", kSpectrumNote}};
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(s);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.emplace_back();
    return fields;
  };
  if (!std::getline(in, line)) return table;
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line)) {
      if (f.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v{};
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      row.push_back(ec == std::errc() ? v : std::numeric_limits<double>::quiet_NaN());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rabisplit::io
