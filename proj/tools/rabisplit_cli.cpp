// rabisplit: command-line front-end for the collective Rabi splitting model.
//
// Every command writes its outputs plus manifest.json into --out-dir. The
// manifest records the canonical argument list, so `rabisplit rerun
// --manifest FILE` reproduces the CSVs byte for byte.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rabisplit/io.hpp"
#include "rabisplit/rabisplit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rabisplit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;
constexpr int kExitInternal = 4;

// Values are shared by all subcommands; presence is looked up on the one
// that was parsed.
struct ParamFlags {
  double g2{}, kappa{}, two_kappa{}, gamma_perp{}, gamma_par{}, photon_energy{};
  long n0{};
  std::string config;
};

// Flags that carry physical parameters; they are replaced by the resolved
// set when the manifest is written.
const std::vector<std::string> kParamFlags = {"--g2",        "--kappa",         "--two-kappa",
                                              "--gamma-perp", "--gamma-par",     "--n0",
                                              "--photon-energy", "--config",    "--out-dir"};

void add_param_flags(CLI::App* app, ParamFlags& f) {
  app->add_option("--g2", f.g2, "squared coupling g^2 (gamma_par^2)");
  auto* kappa = app->add_option("--kappa", f.kappa, "cavity field amplitude decay rate kappa");
  auto* two_kappa =
      app->add_option("--two-kappa", f.two_kappa, "cavity energy decay rate (linewidth) 2*kappa");
  kappa->excludes(two_kappa);
  app->add_option("--gamma-perp", f.gamma_perp, "polarization decay rate");
  app->add_option("--gamma-par", f.gamma_par, "population decay rate (rates are renormalized)");
  app->add_option("--n0", f.n0, "number of emitters N0");
  app->add_option("--photon-energy", f.photon_energy, "hbar*omega0 for output power");
  app->add_option("--config", f.config, "key=value parameter file");
}

ParamInput flags_to_input(const CLI::App& sub, const ParamFlags& f) {
  ParamInput in;
  if (!f.config.empty()) in = parse_config_file(f.config);
  auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  ParamInput cli;
  if (given("--g2")) cli.g2 = f.g2;
  if (given("--kappa")) cli.kappa = f.kappa;
  if (given("--two-kappa")) cli.two_kappa = f.two_kappa;
  if (given("--gamma-perp")) cli.gamma_perp = f.gamma_perp;
  if (given("--gamma-par")) cli.gamma_par = f.gamma_par;
  if (given("--n0")) cli.n_emitters = f.n0;
  if (given("--photon-energy")) cli.photon_energy = f.photon_energy;
  return merge(in, cli);
}

std::vector<std::string> canonical_param_args(const Params& p, bool with_g2, bool with_rates) {
  std::vector<std::string> args;
  if (with_g2) args.insert(args.end(), {"--g2", io::format_number(p.g2)});
  if (with_rates)
    args.insert(args.end(), {"--kappa", io::format_number(p.kappa), "--gamma-perp",
                             io::format_number(p.gamma_perp)});
  args.insert(args.end(), {"--n0", std::to_string(p.n_emitters)});
  if (p.photon_energy)
    args.insert(args.end(), {"--photon-energy", io::format_number(*p.photon_energy)});
  return args;
}

// Command tokens with parameter/config/output flags removed.
std::vector<std::string> strip_param_args(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    const auto eq = t.find('=');
    const std::string name = t.substr(0, eq);
    if (std::find(kParamFlags.begin(), kParamFlags.end(), name) != kParamFlags.end()) {
      if (eq == std::string::npos) ++i;  // skip the value too
      continue;
    }
    if (t == "--json-errors") continue;
    out.push_back(t);
  }
  return out;
}

// "lo:hi:n" (linear, endpoints included) or "lo:hi:nlog" (log-spaced).
Eigen::VectorXd parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3)
    throw Error(ErrorCode::InvalidConfig, "range must be lo:hi:n or lo:hi:nlog, got '" + text + "'");
  bool log = false;
  std::string count = parts[2];
  if (count.size() > 3 && count.substr(count.size() - 3) == "log") {
    log = true;
    count = count.substr(0, count.size() - 3);
  }
  double lo{}, hi{};
  long n{};
  try {
    std::size_t pos = 0;
    lo = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("hi");
    n = std::stol(count, &pos);
    if (pos != count.size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "malformed range '" + text + "'");
  }
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "range needs at least one point");
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  if (!log) return Eigen::VectorXd::LinSpaced(n, lo, hi);
  if (!(lo > 0 && hi > 0))
    throw Error(ErrorCode::InvalidConfig, "log range needs positive endpoints");
  Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(n, std::log10(lo), std::log10(hi));
  grid = grid.unaryExpr([](double e) { return std::pow(10.0, e); });
  grid(0) = lo;
  grid(n - 1) = hi;
  return grid;
}

class Run {
 public:
  Run(std::string command, fs::path out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(out_dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + (out_dir_ / name).string());
    files_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void note(const std::string& text) {
    warnings_.push_back(text);
    std::cerr << "rabisplit: " << text << '\n';
  }

  void finish(const Params& p, const std::vector<std::string>& args, const json& extra = {}) {
    json m;
    m["command"] = command_;
    m["args"] = args;
    m["params"] = io::params_json(p);
    m["units"] = io::kUnitNote;
    m["spectral_normalization"] = io::kSpectrumNote;
    m["p_st_definition"] = io::kStimulatedNote;
    m["notes"] = warnings_;
    if (!extra.is_null()) m.update(extra);
    auto files = files_;
    files.push_back("manifest.json");
    m["files"] = files;
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
  }

  std::vector<std::string>* notes() { return &warnings_; }

 private:
  std::string command_;
  fs::path out_dir_;
  std::vector<std::string> files_;
  std::vector<std::string> warnings_;
};

std::string pump_tag(double pump) { return "p" + io::format_number(pump); }

Params resolve_with_defaults(ParamInput in, Run& run, bool need_g2, bool need_rates) {
  // placeholders for parameters a command does not use
  if (!need_g2 && !in.g2) in.g2 = 1.0;
  if (!need_rates && !in.kappa && !in.two_kappa) in.kappa = 1.0;
  if (!need_rates && !in.gamma_perp) in.gamma_perp = 1.0;
  std::vector<std::string> notes;
  Params p = resolve(in, &notes);
  for (auto& n : notes) run.note(n);
  return p;
}

int dispatch(const std::vector<std::string>& argv);

int run_cli(const std::vector<std::string>& argv, bool& json_errors) {
  CLI::App app{"Steady-state emission spectra, collective Rabi splitting, regimes and linewidths "
               "of incoherently pumped emitters in a single-mode cavity"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string out_dir = ".";
  ParamFlags flags;

  auto common = [&](CLI::App* sub) {
    add_param_flags(sub, flags);
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_flag("--json-errors", json_errors, "print errors as JSON on stdout");
  };

  // steady
  auto* steady = app.add_subcommand("steady", "steady state at one pump or over a pump range");
  common(steady);
  double pump = 0.0;
  std::string pump_range;
  auto* steady_pump = steady->add_option("--pump", pump, "normalized pump P");
  auto* steady_range = steady->add_option("--pump-range", pump_range, "lo:hi:n or lo:hi:nlog");
  steady_pump->excludes(steady_range);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "emission spectrum at one or more pumps");
  common(spectrum);
  std::vector<double> spectrum_pumps;
  double grid_halfwidth = 0.0;
  long grid_points = kDefaultGridPoints;
  bool normalize = false;
  spectrum->add_option("--pump", spectrum_pumps, "normalized pump P (repeatable)")->required();
  auto* halfwidth_opt = spectrum->add_option("--grid-halfwidth", grid_halfwidth, "grid half-width");
  spectrum->add_option("--grid-points", grid_points, "grid points")->check(CLI::Range(2L, 100000000L));
  spectrum->add_flag("--normalize", normalize, "divide each spectrum by its maximum");

  // regimes
  auto* regimes = app.add_subcommand("regimes", "critical inversions, pumps and region label");
  common(regimes);
  double regime_pump = 0.0;
  auto* regime_pump_opt = regimes->add_option("--pump", regime_pump, "pump to classify");

  // phase-diagram
  auto* phase = app.add_subcommand("phase-diagram", "P_St, P_c, P_E versus g2");
  common(phase);
  std::string g2_range = "1:200:200";
  phase->add_option("--g2-range", g2_range, "lo:hi:n or lo:hi:nlog")->capture_default_str();

  // coherence-map
  auto* cmap = app.add_subcommand("coherence-map", "|C0| and Omega_max over (2 kappa, gamma_perp)");
  common(cmap);
  std::string two_kappa_range = "10:400:80", gamma_perp_range = "1:200:80";
  double mark_two_kappa = 160.0, mark_gamma_perp = 19.0, reference_splitting = 0.0;
  cmap->add_option("--two-kappa-range", two_kappa_range, "lo:hi:n")->capture_default_str();
  cmap->add_option("--gamma-perp-range", gamma_perp_range, "lo:hi:n")->capture_default_str();
  cmap->add_option("--mark-two-kappa", mark_two_kappa, "reference point 2 kappa")->capture_default_str();
  cmap->add_option("--mark-gamma-perp", mark_gamma_perp, "reference point gamma_perp")->capture_default_str();
  auto* ref_opt = cmap->add_option("--reference-splitting", reference_splitting,
                                   "Omega_max of the dashed contour (default: at the reference point)");

  // linewidth-sweep
  auto* lsweep = app.add_subcommand("linewidth-sweep", "linewidth and photon number versus pump");
  common(lsweep);
  std::string sweep_range;
  std::vector<long> extra_n0;
  lsweep->add_option("--pump-range", sweep_range, "lo:hi:n or lo:hi:nlog (default 0 + 1e-3:10:200log)");
  lsweep->add_option("--compare-n0", extra_n0, "additional emitter counts (repeatable)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "stochastic Langevin estimate of the spectrum");
  common(oracle);
  double oracle_pump = 0.0, dt = 0.0, t_total = 16.0;
  int n_traj = 200, segments = 8;
  std::uint64_t seed = 42;
  std::string window = "flat";
  oracle->add_option("--pump", oracle_pump, "normalized pump P")->required();
  auto* dt_opt = oracle->add_option("--dt", dt, "time step (default 0.002/max drift rate)");
  oracle->add_option("--t-total", t_total, "recorded time per trajectory")->capture_default_str();
  oracle->add_option("--n-traj", n_traj, "trajectories")->capture_default_str();
  oracle->add_option("--segments", segments, "periodogram segments per trajectory")->capture_default_str();
  oracle->add_option("--seed", seed, "master seed")->capture_default_str();
  oracle->add_option("--window", window, "flat or hann")->capture_default_str()
      ->check(CLI::IsMember({"flat", "hann"}));

  // rerun
  auto* rerun = app.add_subcommand("rerun", "replay a run from its manifest");
  std::string manifest_path;
  rerun->add_option("--manifest", manifest_path, "manifest.json")->required();
  rerun->add_option("--out-dir", out_dir, "output directory");
  rerun->add_flag("--json-errors", json_errors, "print errors as JSON on stdout");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (json_errors || std::find(argv.begin(), argv.end(), "--json-errors") != argv.end()) {
      std::cout << json{{"error", "UsageError"}, {"class", "validation"}, {"message", e.what()}}.dump()
                << '\n';
    } else {
      app.exit(e);
    }
    return kExitValidation;
  }

  if (rerun->parsed()) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open manifest '" + manifest_path + "'");
    const json m = json::parse(in);
    auto args = m.at("args").get<std::vector<std::string>>();
    args.push_back("--out-dir");
    args.push_back(out_dir);
    return dispatch(args);
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Run run(command, out_dir);
  const ParamInput input = flags_to_input(*sub, flags);
  const std::vector<std::string> tail = strip_param_args({argv.begin() + 2, argv.end()});
  auto manifest_args = [&](const Params& p, bool with_g2, bool with_rates) {
    std::vector<std::string> args{command};
    const auto params = canonical_param_args(p, with_g2, with_rates);
    args.insert(args.end(), params.begin(), params.end());
    args.insert(args.end(), tail.begin(), tail.end());
    return args;
  };

  if (command == "steady") {
    const Params p = resolve_with_defaults(input, run, true, true);
    Eigen::VectorXd pumps = steady_range->count() ? parse_range(pump_range)
                                                  : Eigen::VectorXd::Constant(1, pump);
    std::vector<SteadyState<double>> states;
    for (Eigen::Index i = 0; i < pumps.size(); ++i) {
      states.push_back(solve_steady_state(p, pumps(i)));
      if (states.back().photons > p.n0())
        run.note("<n> = " + io::format_number(states.back().photons) + " exceeds N0 at P = " +
                 io::format_number(pumps(i)) + "; the model assumes <n> << N0");
    }
    const std::string csv = io::steady_csv(states);
    std::cout << csv;
    run.write("steady.csv", csv);
    run.finish(p, manifest_args(p, true, true));
    return kExitOk;
  }

  if (command == "spectrum") {
    const Params p = resolve_with_defaults(input, run, true, true);
    for (double pv : spectrum_pumps) {
      const auto state = solve_steady_state(p, pv);
      const double hw = halfwidth_opt->count() ? grid_halfwidth
                                               : default_grid_halfwidth(p, state.inversion);
      const auto analysis = evaluate(p, state, symmetric_grid(hw, grid_points));
      const std::string stem = "spectrum_" + pump_tag(pv);
      run.write(stem + ".csv", io::spectrum_csv(analysis, normalize));
      run.write_json(stem + ".json", io::spectrum_json(p, state, analysis, normalize));
      std::cout << "P = " << io::format_number(pv) << ": " << analysis.peak_positions.size()
                << " peak(s), splitting " << io::format_number(analysis.splitting) << '\n';
    }
    run.finish(p, manifest_args(p, true, true));
    return kExitOk;
  }

  if (command == "regimes") {
    const Params p = resolve_with_defaults(input, run, true, true);
    std::optional<double> at;
    if (regime_pump_opt->count()) at = regime_pump;
    const json j = io::regime_json(regime_report(p, at));
    std::cout << j.dump(2) << '\n';
    run.write_json("regimes.json", j);
    run.finish(p, manifest_args(p, true, true));
    return kExitOk;
  }

  if (command == "phase-diagram") {
    const Params p = resolve_with_defaults(input, run, false, true);
    const auto diagram = phase_diagram(p, parse_range(g2_range));
    run.write("phase_diagram.csv", io::phase_diagram_csv(diagram));
    run.write_json("phase_diagram.json", {{"vertical_g2", diagram.vertical_g2},
                                          {"params_without_g2", io::params_json(p)},
                                          {"p_st_definition", io::kStimulatedNote}});
    std::cout << "vertical boundary N_th = N0 at g2 = " << io::format_number(diagram.vertical_g2)
              << '\n';
    run.finish(p, manifest_args(p, false, true));
    return kExitOk;
  }

  if (command == "coherence-map") {
    const Params p = resolve_with_defaults(input, run, true, false);
    double level = reference_splitting;
    if (!ref_opt->count()) {
      Params mark = p;
      mark.kappa = mark_two_kappa / 2.0;
      mark.gamma_perp = mark_gamma_perp;
      level = max_splitting(validate(mark));
    }
    const auto map = coherence_map(p.g2, p.n_emitters, parse_range(two_kappa_range),
                                   parse_range(gamma_perp_range), level);
    run.write("coherence_map.csv", io::coherence_map_csv(map));
    run.write("contour_zero.csv", io::contour_csv(map.zero_contour));
    run.write("contour_reference.csv", io::contour_csv(map.reference_contour));
    run.write_json("coherence_map.json", {{"g2", p.g2},
                                          {"n_emitters", p.n_emitters},
                                          {"reference_splitting", level},
                                          {"mark", {{"two_kappa", mark_two_kappa},
                                                    {"gamma_perp", mark_gamma_perp}}}});
    std::cout << "reference Omega_max = " << io::format_number(level) << '\n';
    run.finish(p, manifest_args(p, true, false));
    return kExitOk;
  }

  if (command == "linewidth-sweep") {
    const Params p = resolve_with_defaults(input, run, true, true);
    const Eigen::VectorXd pumps = sweep_range.empty() ? default_pump_grid() : parse_range(sweep_range);
    std::vector<long> counts{p.n_emitters};
    counts.insert(counts.end(), extra_n0.begin(), extra_n0.end());
    json summary = json::array();
    for (long n0 : counts) {
      Params q = p;
      q.n_emitters = n0;
      q = validate(q, run.notes());
      const auto points = pump_sweep(q, pumps);
      run.write("linewidth_n0_" + std::to_string(n0) + ".csv", io::linewidth_csv(points));
      const bool led = threshold_inversion(q) >= q.n0();
      summary.push_back({{"n_emitters", n0}, {"n_th", threshold_inversion(q)},
                         {"behaviour", led ? "LED" : "laser"}});
    }
    run.write_json("linewidth.json", {{"sweeps", summary}});
    run.finish(p, manifest_args(p, true, true));
    return kExitOk;
  }

  if (command == "oracle") {
    const Params p = resolve_with_defaults(input, run, true, true);
    const auto state = solve_steady_state(p, oracle_pump);
    OracleOptions opt;
    opt.dt = dt_opt->count() ? dt : default_step(p, state.inversion);
    opt.t_total = t_total;
    opt.n_traj = n_traj;
    opt.seed = seed;
    opt.segments = segments;
    opt.window = window == "hann" ? Window::Hann : Window::Flat;
    const auto estimate = simulate_spectrum(p, state, opt);
    run.write("oracle.csv", io::oracle_csv(estimate));
    json meta = io::oracle_json(estimate);
    meta["pump"] = oracle_pump;
    meta["photons_closed_form"] = state.photons;
    run.write_json("oracle.json", meta);
    const auto n = estimate_photon_number(estimate);
    std::cout << "<n> oracle = " << io::format_number(n.mean) << " +- "
              << io::format_number(n.std_error) << ", closed form "
              << io::format_number(state.photons) << '\n';
    auto args = manifest_args(p, true, true);
    if (!dt_opt->count()) args.insert(args.end(), {"--dt", io::format_number(opt.dt)});
    run.finish(p, args, {{"seed", seed}});
    return kExitOk;
  }
  return kExitInternal;
}

int dispatch(const std::vector<std::string>& argv) {
  bool json_errors = std::find(argv.begin(), argv.end(), "--json-errors") != argv.end();
  auto report = [&](const std::string& code, const std::string& cls, const std::string& message) {
    if (json_errors)
      std::cout << json{{"error", code}, {"class", cls}, {"message", message}}.dump() << '\n';
    else
      std::cerr << "rabisplit: " << code << ": " << message << '\n';
  };
  try {
    std::vector<std::string> full{"rabisplit"};
    full.insert(full.end(), argv.begin(), argv.end());
    return run_cli(full, json_errors);
  } catch (const Error& e) {
    switch (error_class(e.code())) {
      case ErrorClass::Validation:
        report(std::string(to_string(e.code())), "validation", e.what());
        return kExitValidation;
      case ErrorClass::Domain:
        report(std::string(to_string(e.code())), "domain", e.what());
        return kExitDomain;
      case ErrorClass::Internal:
        break;
    }
    report(std::string(to_string(e.code())), "internal", e.what());
    return kExitInternal;
  } catch (const std::exception& e) {
    report("InternalError", "internal", e.what());
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  return dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
