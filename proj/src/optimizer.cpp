#include "mzfid/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "mzfid/errors.hpp"
#include "mzfid/fidelity.hpp"
#include "mzfid/nelder_mead.hpp"
#include "mzfid/random.hpp"

namespace mzfid {

namespace {

std::vector<Complex> to_complex(const std::vector<double>& params) {
  std::vector<Complex> out(params.size() / 2);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = {params[2 * n], params[2 * n + 1]};
  return out;
}

}  // namespace

StateCoefficients project_normalize(std::span<const Complex> raw, std::string label) {
  double norm2 = 0.0;
  for (const auto& c : raw) norm2 += std::norm(c);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw DomainError("cannot normalize a zero or non-finite coefficient vector");
  }
  const double scale = 1.0 / std::sqrt(norm2);

  Complex rotation = 1.0;
  for (const auto& c : raw) {
    if (c != Complex{}) {
      rotation = std::conj(c) / std::abs(c);
      break;
    }
  }

  std::vector<Complex> out(raw.size());
  bool fixed = false;
  for (std::size_t n = 0; n < raw.size(); ++n) {
    out[n] = raw[n] * rotation * scale;
    if (!fixed && raw[n] != Complex{}) {
      out[n] = std::abs(raw[n]) * scale;
      fixed = true;
    }
  }
  return StateCoefficients(std::move(out), std::move(label));
}

OptimizationResult optimize_input_state(int photons, const OptimizerConfig& config, const RestartObserver& observer) {
  if (photons < 1) throw InvalidArgument("optimizer needs at least one photon");
  if (config.restarts < 2) throw InvalidArgument("optimizer needs at least 2 restarts (Fock and N00N seeds)");
  if (config.max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (!(config.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");

  const TransferExpansion expansion(photons, config.geometry);
  const auto dim = 2 * (static_cast<std::size_t>(photons) + 1);

  std::size_t evaluations = 0;
  const auto objective = [&](const std::vector<double>& params) {
    ++evaluations;
    const auto raw = to_complex(params);
    double norm2 = 0.0;
    for (const auto& c : raw) norm2 += std::norm(c);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) return std::numeric_limits<double>::infinity();
    const StateCoefficients state = project_normalize(raw);
    return -mutual_information(likelihood_table(expansion.expand(state), config.search_grid)).h_bits;
  };

  NelderMeadOptions options;
  options.max_iterations = config.max_iterations;
  options.f_tolerance = config.tolerance;

  Rng rng(config.seed);
  std::vector<RestartSummary> history;
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();
  int best_restart = 0;

  for (int r = 0; r < config.restarts; ++r) {
    std::vector<double> start(dim, 0.0);
    std::string kind;
    if (r == 0) {
      kind = "fock";
      start[dim - 2] = 1.0;
    } else if (r == 1) {
      kind = "noon";
      start[0] = std::numbers::sqrt2 / 2.0;
      start[dim - 2] = std::numbers::sqrt2 / 2.0;
    } else {
      kind = "random";
      for (double& v : start) v = standard_normal(rng);
    }

    const std::size_t before = evaluations;
    NelderMeadResult run = nelder_mead(objective, std::move(start), options);
    RestartSummary summary{r, kind, -run.value, run.iterations, evaluations - before, run.converged};
    if (run.value < best_value) {
      best_value = run.value;
      best_params = std::move(run.x);
      best_restart = r;
    }
    if (observer) observer(summary);
    history.push_back(std::move(summary));
  }

  StateCoefficients best_state = project_normalize(to_complex(best_params), "optimized");
  const double reported =
      mutual_information(likelihood_table(expansion.expand(best_state), config.report_grid)).h_bits;
  return {std::move(best_state), reported, -best_value, best_restart, std::move(history), evaluations};
}

}  // namespace mzfid
