// mzfid: batch front end for Mach-Zehnder phase-sensitivity computations.
//
//   mzfid probs     --state fock --n 3 [--grid 8192]
//   mzfid posterior --state noon --n 25 --outcome 4,21
//   mzfid fidelity  --state fock --n 1 | --sweep fock,noon --n-max 25 [--repeats R]
//   mzfid optimize  --n 2 --seed 7
//   mzfid simulate  --state fock --n 1 --phi pi/2 --shots 10000 --seed 1
//   mzfid replay    run.csv.manifest.json [--out again.csv]
//
// Primary output goes to --out or standard output. The run manifest goes to --manifest,
// to <out>.manifest.json when --out is given, and to standard error otherwise. Secondary
// outputs (posterior sidecar, simulation summary) follow the same rule with their own
// suffixes.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "mzfid/mzfid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mzfid::cli {
namespace {

struct Common {
  std::string state;
  std::optional<int> photons;
  std::size_t grid = kDefaultGridSize;
  double kl1 = 0.0;
  double kl2 = 0.0;
  std::string out;
  std::string manifest;

  InterferometerGeometry geometry() const { return {kl1, kl2}; }
};

void add_output_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Write the primary output here instead of stdout");
  cmd->add_option("--manifest", c.manifest, "Run manifest path (default <out>.manifest.json)");
}

void add_geometry_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--kl1", c.kl1, "Optical phase k*L1 of the upper arm")->default_val(0.0);
  cmd->add_option("--kl2", c.kl2, "Optical phase k*L2 of the lower arm")->default_val(0.0);
}

json geometry_json(const Common& c) { return {{"kL1", c.kl1}, {"kL2", c.kl2}}; }

/// Writes a secondary JSON document to `<out><suffix>` or, without --out, to stderr.
void emit_side(const Common& c, const std::string& explicit_path, const std::string& suffix, const json& doc) {
  std::string path = explicit_path;
  if (path.empty() && !c.out.empty()) path = c.out + suffix;
  if (path.empty()) {
    std::cerr << doc.dump() << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << doc.dump(2) << '\n';
}

void emit_manifest(const Common& c, const std::string& command, const std::vector<std::string>& argv,
                   json parameters) {
  emit_side(c, c.manifest, ".manifest.json", make_manifest(command, argv, std::move(parameters)));
}

json peaks_json(const PhasePosterior& posterior) {
  json peaks = json::array();
  for (const auto& p : posterior.peaks) {
    peaks.push_back({{"phi", round_to_output(p.phi)}, {"height", round_to_output(p.height)}});
  }
  return peaks;
}

json circular_json(const PhasePosterior& posterior) {
  try {
    const auto s = circular_summary(posterior);
    return {{"mean", round_to_output(s.mean)},
            {"std", round_to_output(s.stddev)},
            {"resultant_length", round_to_output(s.resultant_length)}};
  } catch (const DomainError& e) {
    return {{"mean", nullptr}, {"std", nullptr}, {"error", e.what()}};
  }
}

void write_posterior_csv(std::ostream& os, const PhasePosterior& posterior) {
  os << "phi,density\n";
  for (std::size_t k = 0; k < posterior.density.size(); ++k) {
    os << format_number(posterior.grid.point(k)) << ',' << format_number(posterior.density[k]) << '\n';
  }
}

// ---------------------------------------------------------------------------

int cmd_probs(const Common& c, const std::vector<std::string>& argv) {
  const StateCoefficients state = resolve_state(c.state, c.photons);
  const LikelihoodTable table = likelihood_table(state, c.geometry(), c.grid);

  OutputSink sink(c.out);
  auto& os = sink.stream();
  os << "phi";
  for (const auto& o : table.outcomes()) {
    os << ',' << csv_field("P(" + std::to_string(o.n_c) + "," + std::to_string(o.n_d) + ")");
  }
  os << '\n';
  for (std::size_t k = 0; k < table.columns(); ++k) {
    os << format_number(table.grid().point(k));
    for (std::size_t r = 0; r < table.rows(); ++r) os << ',' << format_number(table(r, k));
    os << '\n';
  }

  emit_manifest(c, "probs", argv,
                {{"state", state_parameters(state, c.state)}, {"grid", c.grid}, {"geometry", geometry_json(c)}});
  return kOk;
}

int cmd_posterior(const Common& c, const std::string& outcome_text, const std::string& sidecar,
                  const std::vector<std::string>& argv) {
  const StateCoefficients state = resolve_state(c.state, c.photons);
  const Outcome outcome = parse_outcome(outcome_text);
  if (outcome.total() != state.photons()) {
    throw InvalidArgument("outcome " + outcome_text + " does not add up to N = " + std::to_string(state.photons()));
  }
  PhasePosterior posterior = posterior_density(likelihood_table(state, c.geometry(), c.grid), outcome);
  const int peaks = count_peaks(posterior);

  OutputSink sink(c.out);
  write_posterior_csv(sink.stream(), posterior);

  emit_side(c, sidecar, ".peaks.json",
            {{"outcome", {outcome.n_c, outcome.n_d}},
             {"N", state.photons()},
             {"grid_size", c.grid},
             {"peak_count", peaks},
             {"peaks", peaks_json(posterior)},
             {"circular", circular_json(posterior)},
             {"total_mass", round_to_output(posterior.total_mass())}});
  emit_manifest(c, "posterior", argv,
                {{"state", state_parameters(state, c.state)},
                 {"outcome", {outcome.n_c, outcome.n_d}},
                 {"grid", c.grid},
                 {"geometry", geometry_json(c)}});
  return kOk;
}

int cmd_fidelity(const Common& c, const std::string& sweep, std::optional<int> n_max, int repeats,
                 const std::vector<std::string>& argv) {
  if (repeats < 1) throw InvalidArgument("--repeats must be at least 1");

  std::vector<std::pair<std::string, StateCoefficients>> states;
  json parameters = {{"grid", c.grid}, {"repeats", repeats}, {"geometry", geometry_json(c)}};
  if (!sweep.empty()) {
    if (!n_max) throw InvalidArgument("--sweep needs --n-max");
    if (*n_max < 1 || *n_max > kMaxPhotons) {
      throw InvalidArgument("--n-max must be in 1.." + std::to_string(kMaxPhotons));
    }
    std::stringstream families(sweep);
    std::string family;
    std::vector<std::string> names;
    while (std::getline(families, family, ',')) {
      if (family != "fock" && family != "noon") throw InvalidArgument("unknown sweep family '" + family + "'");
      names.push_back(family);
    }
    // Grouped by N so each row pair is directly comparable.
    for (int n = 1; n <= *n_max; ++n) {
      for (const auto& name : names) states.emplace_back(name, resolve_state(name, n));
    }
    parameters["sweep"] = names;
    parameters["n_max"] = *n_max;
  } else {
    if (c.state.empty()) throw InvalidArgument("fidelity needs --state or --sweep");
    states.emplace_back(c.state, resolve_state(c.state, c.photons));
    parameters["state"] = state_parameters(states.front().second, c.state);
  }

  OutputSink sink(c.out);
  auto& os = sink.stream();
  os << "state,N,H_bits\n";
  for (const auto& [name, state] : states) {
    const LikelihoodTable table = likelihood_table(state, c.geometry(), c.grid);
    const FidelityReport report =
        repeats == 1 ? mutual_information(table) : repeated_mutual_information(table, repeats);
    os << csv_field(report.state_label) << ',' << report.photons << ',' << format_number(report.h_bits) << '\n';
  }
  emit_manifest(c, "fidelity", argv, std::move(parameters));
  return kOk;
}

struct OptimizeFlags {
  int photons = 1;
  OptimizerConfig config;
};

int cmd_optimize(const Common& c, const OptimizeFlags& f, const std::vector<std::string>& argv) {
  if (f.photons < 1 || f.photons > kMaxPhotons) {
    throw InvalidArgument("--n must be in 1.." + std::to_string(kMaxPhotons));
  }
  OptimizerConfig config = f.config;
  config.geometry = c.geometry();
  const OptimizationResult result = optimize_input_state(f.photons, config, [](const RestartSummary& r) {
    std::cerr << "restart " << r.index << " (" << r.start << "): H = " << format_number(r.best_h) << " bits after "
              << r.iterations << " iterations" << (r.converged ? "" : " [not converged]") << '\n';
  });

  json coeffs = json::array();
  for (const auto& z : result.best_state.coeffs()) coeffs.push_back({round_to_output(z.real()), round_to_output(z.imag())});
  json history = json::array();
  for (const auto& r : result.history) {
    history.push_back({{"restart", r.index},
                       {"start", r.start},
                       {"best_H", round_to_output(r.best_h)},
                       {"iterations", r.iterations},
                       {"evaluations", r.evaluations},
                       {"converged", r.converged}});
  }
  const json config_json = {{"restarts", config.restarts},
                            {"max_iterations", config.max_iterations},
                            {"tolerance", config.tolerance},
                            {"seed", config.seed},
                            {"search_grid", config.search_grid},
                            {"report_grid", config.report_grid},
                            {"geometry", geometry_json(c)}};
  const json doc = {{"N", f.photons},
                    {"best_H", round_to_output(result.best_h)},
                    {"search_H", round_to_output(result.search_h)},
                    {"best_restart", result.best_restart},
                    {"best_state", coeffs},
                    {"evaluations", result.evaluations},
                    {"history", history},
                    {"config", config_json}};

  OutputSink sink(c.out);
  sink.stream() << doc.dump(2) << '\n';
  emit_manifest(c, "optimize", argv, {{"N", f.photons}, {"config", config_json}});
  return kOk;
}

int cmd_simulate(const Common& c, const std::string& phase_text, std::size_t shots, std::uint64_t seed,
                 const std::string& summary_path, const std::vector<std::string>& argv) {
  const StateCoefficients state = resolve_state(c.state, c.photons);
  const double phi = parse_phase(phase_text);
  if (!std::isfinite(phi)) throw InvalidArgument("--phi must be finite");
  if (shots < 1) throw InvalidArgument("--shots must be at least 1");

  const SimulationResult sim = simulate_sequence(state, c.geometry(), phi, shots, seed, c.grid);

  OutputSink sink(c.out);
  auto& os = sink.stream();
  os << "shot,n_c,n_d\n";
  std::map<int, std::size_t> counts;
  for (std::size_t i = 0; i < sim.record.outcomes.size(); ++i) {
    const Outcome& o = sim.record.outcomes[i];
    os << (i + 1) << ',' << o.n_c << ',' << o.n_d << '\n';
    ++counts[o.n_c];
  }
  if (!c.out.empty()) {
    std::ofstream post(c.out + ".posterior.csv");
    if (!post) throw InvalidArgument("cannot write '" + c.out + ".posterior.csv'");
    write_posterior_csv(post, sim.final_posterior);
  }

  json frequencies = json::array();
  for (const auto& o : outcomes_for(state.photons())) {
    const std::size_t n = counts.count(o.n_c) ? counts.at(o.n_c) : 0;
    frequencies.push_back({{"outcome", {o.n_c, o.n_d}},
                           {"count", n},
                           {"frequency", round_to_output(static_cast<double>(n) / static_cast<double>(shots))}});
  }
  emit_side(c, summary_path, ".summary.json",
            {{"true_phase", round_to_output(phi)},
             {"shots", shots},
             {"seed", seed},
             {"frequencies", frequencies},
             {"peak_count", sim.final_posterior.peaks.size()},
             {"peaks", peaks_json(sim.final_posterior)},
             {"circular", circular_json(sim.final_posterior)}});
  emit_manifest(c, "simulate", argv,
                {{"state", state_parameters(state, c.state)},
                 {"true_phase", phi},
                 {"shots", shots},
                 {"seed", seed},
                 {"grid", c.grid},
                 {"geometry", geometry_json(c)}});
  return kOk;
}

int run(std::vector<std::string> args);

/// Re-executes the argv recorded in a manifest. Coefficient-file states are rebuilt from
/// the coefficients stored in the manifest, so the original file is not needed.
int cmd_replay(const std::string& manifest_path, const std::string& out, const std::string& manifest_out) {
  std::ifstream in(manifest_path);
  if (!in) throw InvalidArgument("cannot read manifest '" + manifest_path + "'");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed manifest: " + std::string(e.what()));
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) throw InvalidArgument("manifest has no argv");

  std::vector<std::string> recorded = manifest["argv"].get<std::vector<std::string>>();
  std::vector<std::string> args;
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    if (recorded[i] == "--out" || recorded[i] == "--manifest") {
      ++i;
      continue;
    }
    if (recorded[i].starts_with("--out=") || recorded[i].starts_with("--manifest=")) continue;
    args.push_back(recorded[i]);
  }

  std::optional<fs::path> temp_coeffs;
  const auto& params = manifest["parameters"];
  if (params.contains("state") && params["state"].value("label", "") == "custom") {
    std::vector<Complex> coeffs;
    for (const auto& pair : params["state"]["coefficients"]) coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    temp_coeffs = fs::temp_directory_path() / ("mzfid-replay-" + std::to_string(std::hash<std::string>{}(manifest_path)) + ".txt");
    write_coefficient_file(*temp_coeffs, coeffs);
    const std::string spec = params["state"]["spec"].get<std::string>();
    for (auto& a : args) {
      if (a == spec) a = temp_coeffs->string();
    }
  }

  if (!out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  }
  if (!manifest_out.empty()) {
    args.push_back("--manifest");
    args.push_back(manifest_out);
  }
  const int code = run(args);
  if (temp_coeffs) fs::remove(*temp_coeffs);
  return code;
}

int run(std::vector<std::string> args) {
  CLI::App app{"Phase sensitivity and fidelity of a two-port Mach-Zehnder interferometer", "mzfid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common c;
  std::string outcome, sweep, phase = "", sidecar, summary, replay_manifest;
  std::optional<int> n_max;
  int repeats = 1;
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  OptimizeFlags opt;

  const auto state_options = [&](CLI::App* cmd) {
    cmd->add_option("--state", c.state, "fock, noon, or a coefficient file ('re im' per line)")->required();
    cmd->add_option("--n", c.photons, "Total photon number N");
    cmd->add_option("--grid", c.grid, "Phase grid points over (-pi, pi]")->default_val(kDefaultGridSize);
    add_geometry_options(cmd, c);
    add_output_options(cmd, c);
  };

  auto* probs = app.add_subcommand("probs", "Tabulate P(n_c,n_d | phi) on the phase grid");
  state_options(probs);

  auto* posterior = app.add_subcommand("posterior", "Posterior p(phi | n_c,n_d) with peak analysis");
  state_options(posterior);
  posterior->add_option("--outcome", outcome, "Measured counts n_c,n_d")->required();
  posterior->add_option("--sidecar", sidecar, "Peak summary JSON path (default <out>.peaks.json)");

  auto* fidelity = app.add_subcommand("fidelity", "Mutual information H(Phi:M) in bits");
  fidelity->add_option("--state", c.state, "fock, noon, or a coefficient file");
  fidelity->add_option("--n", c.photons, "Total photon number N");
  fidelity->add_option("--sweep", sweep, "Comma-separated families for an N sweep, e.g. fock,noon");
  fidelity->add_option("--n-max", n_max, "Largest N in a sweep");
  fidelity->add_option("--repeats", repeats, "Independent uses per measurement record")->default_val(1);
  fidelity->add_option("--grid", c.grid, "Phase grid points")->default_val(kDefaultGridSize);
  add_geometry_options(fidelity, c);
  add_output_options(fidelity, c);

  auto* optimize = app.add_subcommand("optimize", "Search input coefficients that maximize H(Phi:M)");
  optimize->add_option("--n", opt.photons, "Total photon number N")->required();
  optimize->add_option("--seed", opt.config.seed, "Random seed")->default_val(0);
  optimize->add_option("--restarts", opt.config.restarts, "Restarts including Fock and N00N seeds")->default_val(16);
  optimize->add_option("--max-iter", opt.config.max_iterations, "Simplex iterations per restart")->default_val(2000);
  optimize->add_option("--tol", opt.config.tolerance, "Convergence tolerance on H (bits)")->default_val(1e-7);
  optimize->add_option("--search-grid", opt.config.search_grid, "Grid used during the search")->default_val(4096);
  optimize->add_option("--grid", opt.config.report_grid, "Grid for the reported value")->default_val(kDefaultGridSize);
  add_geometry_options(optimize, c);
  add_output_options(optimize, c);

  auto* simulate = app.add_subcommand("simulate", "Sample a measurement record and update the posterior");
  state_options(simulate);
  simulate->add_option("--phi", phase, "True phase, e.g. 0.3 or pi/2")->required();
  simulate->add_option("--shots", shots, "Number of measurements")->default_val(1000);
  simulate->add_option("--seed", seed, "Random seed")->default_val(0);
  simulate->add_option("--summary", summary, "Summary JSON path (default <out>.summary.json)");

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest_path", replay_manifest, "Manifest JSON written by an earlier run")->required();
  add_output_options(replay, c);

  std::vector<const char*> raw{"mzfid"};
  for (const auto& a : args) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*probs) return cmd_probs(c, args);
  if (*posterior) return cmd_posterior(c, outcome, sidecar, args);
  if (*fidelity) return cmd_fidelity(c, sweep, n_max, repeats, args);
  if (*optimize) return cmd_optimize(c, opt, args);
  if (*simulate) return cmd_simulate(c, phase, shots, seed, summary, args);
  if (*replay) return cmd_replay(replay_manifest, c.out, c.manifest);
  return kUsage;
}

}  // namespace
}  // namespace mzfid::cli

int main(int argc, char** argv) {
  using namespace mzfid;
  try {
    return cli::run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const ImpossibleOutcome& e) {
    std::cerr << "mzfid: zero-probability outcome: " << e.what() << '\n';
    return cli::kDomain;
  } catch (const InvalidArgument& e) {
    std::cerr << "mzfid: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const DomainError& e) {
    std::cerr << "mzfid: " << e.what() << '\n';
    return cli::kDomain;
  } catch (const ResourceLimit& e) {
    std::cerr << "mzfid: " << e.what() << '\n';
    return cli::kResource;
  } catch (const std::exception& e) {
    std::cerr << "mzfid: " << e.what() << '\n';
    return 1;
  }
}
