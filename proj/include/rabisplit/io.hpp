#ifndef RABISPLIT_IO_HPP
#define RABISPLIT_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rabisplit/langevin.hpp"
#include "rabisplit/linewidth.hpp"
#include "rabisplit/params.hpp"
#include "rabisplit/regimes.hpp"
#include "rabisplit/spectrum.hpp"
#include "rabisplit/steady_state.hpp"

namespace rabisplit::io {

// Shortest representation that round-trips to the same double.
std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

// Notes recorded in every output's metadata.
inline constexpr const char* kUnitNote =
    "all rates in units of gamma_par; kappa is the field amplitude decay rate (cavity energy decay 2*kappa)";
inline constexpr const char* kSpectrumNote =
    "omega is the offset from cavity resonance (omega - omega0) in units of gamma_par; "
    "n_omega is normalized so that <n> = integral n_omega d(omega)/(2 pi)";
inline constexpr const char* kStimulatedNote =
    "P_St is the pump at which <n> = 1 (stimulated emission into the mode equals spontaneous emission into it)";

nlohmann::json params_json(const Params& p);

std::string steady_csv(const std::vector<SteadyState<double>>& states);

// columns omega,n_omega; when `normalized` the density is divided by its
// maximum on the grid.
std::string spectrum_csv(const SpectrumAnalysis<double>& s, bool normalized = false);
nlohmann::json spectrum_json(const Params& p, const SteadyState<double>& state,
                             const SpectrumAnalysis<double>& s, bool normalized);

nlohmann::json regime_json(const RegimeReport<double>& report);

std::string phase_diagram_csv(const PhaseDiagram<double>& d);
std::string coherence_map_csv(const CoherenceMap<double>& m);
std::string contour_csv(const std::vector<MapPoint<double>>& contour);

std::string linewidth_csv(const std::vector<LinewidthPoint<double>>& points);

std::string oracle_csv(const OracleEstimate& e);
nlohmann::json oracle_json(const OracleEstimate& e);

// Minimal CSV reader for tests and re-ingestion: header + numeric rows
// (empty fields become NaN).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text);

}  // namespace rabisplit::io

#endif  // RABISPLIT_IO_HPP
