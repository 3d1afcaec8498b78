#include "mzfid/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "mzfid/errors.hpp"
#include "mzfid/random.hpp"

namespace mzfid {

namespace {

constexpr double kMinResultant = 1e-12;

std::size_t row_for(const LikelihoodTable& table, Outcome outcome) {
  const auto& outcomes = table.outcomes();
  const auto it = std::find(outcomes.begin(), outcomes.end(), outcome);
  if (it == outcomes.end()) {
    throw DomainError("outcome (" + std::to_string(outcome.n_c) + "," + std::to_string(outcome.n_d) +
                      ") is not in the likelihood table");
  }
  return static_cast<std::size_t>(it - outcomes.begin());
}

}  // namespace

double PhasePosterior::total_mass() const {
  double sum = 0.0;
  for (double p : density) sum += p;
  return sum * grid.weight();
}

PhasePosterior posterior_density(std::span<const double> likelihood_row, const PhaseGrid& grid,
                                 Outcome outcome) {
  if (likelihood_row.size() != grid.size()) {
    throw InvalidArgument("likelihood row length does not match the phase grid");
  }
  double sum = 0.0;
  double largest = 0.0;
  for (double p : likelihood_row) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("likelihoods must be finite and non-negative");
    sum += p;
    largest = std::max(largest, p);
  }
  if (largest == 0.0) {
    throw ImpossibleOutcome("zero-probability outcome (" + std::to_string(outcome.n_c) + "," +
                            std::to_string(outcome.n_d) + ")");
  }

  const double norm = 1.0 / (sum * grid.weight());
  PhasePosterior posterior{grid, std::vector<double>(likelihood_row.size()), outcome, {}};
  for (std::size_t k = 0; k < likelihood_row.size(); ++k) posterior.density[k] = likelihood_row[k] * norm;
  return posterior;
}

PhasePosterior posterior_density(const LikelihoodTable& table, Outcome outcome) {
  return posterior_density(table.row(row_for(table, outcome)), table.grid(), outcome);
}

int count_peaks(PhasePosterior& posterior, double relative_threshold) {
  const auto& d = posterior.density;
  const std::size_t size = d.size();
  posterior.peaks.clear();

  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  // Values within rounding noise of each other belong to the same plateau.
  const double tie = kPlateauTolerance * *hi;
  const auto same = [tie](double a, double b) { return std::abs(a - b) <= tie; };
  if (same(*lo, *hi)) {
    posterior.peaks.push_back({0.0, *hi});
    return 1;
  }
  const double floor = relative_threshold * *hi;

  // Rotate so that index 0 opens a run; runs then never wrap.
  std::size_t start = 0;
  while (start < size && same(d[start], d[(start + size - 1) % size])) ++start;
  if (start == size) start = 0;

  struct Run {
    std::size_t first;
    std::size_t length;
    double value;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < size;) {
    const std::size_t first = (start + i) % size;
    std::size_t length = 1;
    while (i + length < size && same(d[(start + i + length) % size], d[first])) ++length;
    runs.push_back({first, length, d[first]});
    i += length;
  }

  const std::size_t count = runs.size();
  for (std::size_t r = 0; r < count; ++r) {
    const Run& run = runs[r];
    const double before = runs[(r + count - 1) % count].value;
    const double after = runs[(r + 1) % count].value;
    if (run.value > before && run.value > after && run.value > floor) {
      const double mid = posterior.grid.point(run.first) +
                         0.5 * static_cast<double>(run.length - 1) * posterior.grid.weight();
      posterior.peaks.push_back({wrap_phase(mid), run.value});
    }
  }
  std::sort(posterior.peaks.begin(), posterior.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.phi < b.phi; });
  return static_cast<int>(posterior.peaks.size());
}

CircularSummary circular_summary(const PhasePosterior& posterior) {
  Complex resultant = 0.0;
  for (std::size_t k = 0; k < posterior.density.size(); ++k) {
    resultant += posterior.density[k] * std::polar(1.0, posterior.grid.point(k));
  }
  resultant *= posterior.grid.weight();
  const double length = std::abs(resultant);
  if (length < kMinResultant) {
    throw DomainError("circular mean undefined: resultant length is zero");
  }
  const double stddev = length >= 1.0 ? 0.0 : std::sqrt(-2.0 * std::log(length));
  return {std::arg(resultant), stddev, length};
}

// ---------------------------------------------------------------------------
// Sequential updates

SequentialPosterior::SequentialPosterior(LikelihoodTable table)
    : table_(std::move(table)), log_likelihood_(table_.columns(), 0.0) {}

void SequentialPosterior::update(Outcome outcome) {
  const auto row = table_.row(row_for(table_, outcome));
  for (std::size_t k = 0; k < row.size(); ++k) {
    log_likelihood_[k] += row[k] > 0.0 ? std::log(row[k]) : -std::numeric_limits<double>::infinity();
  }
  last_ = outcome;
  ++updates_;
}

PhasePosterior SequentialPosterior::posterior() const {
  const double top = *std::max_element(log_likelihood_.begin(), log_likelihood_.end());
  if (top == -std::numeric_limits<double>::infinity()) {
    throw ImpossibleOutcome("measurement record has zero likelihood at every phase");
  }
  std::vector<double> scaled(log_likelihood_.size());
  for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] = std::exp(log_likelihood_[k] - top);
  return posterior_density(scaled, table_.grid(), last_);
}

SimulationResult simulate_sequence(const StateCoefficients& state, const InterferometerGeometry& geometry,
                                   double true_phase, std::size_t shots, std::uint64_t seed,
                                   std::size_t grid_size, const PosteriorObserver& observer) {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (!std::isfinite(true_phase)) throw InvalidArgument("true phase must be finite");

  const TransferExpansion expansion(state.photons(), geometry);
  const PhaseResponse response = expansion.expand(state);
  SequentialPosterior running(likelihood_table(response, grid_size, state.label()));

  const auto outcomes = outcomes_for(state.photons());
  std::vector<double> cumulative(outcomes.size());
  double total = 0.0;
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    total += response.probability(static_cast<int>(m), true_phase);
    cumulative[m] = total;
  }

  Rng rng(seed);
  MeasurementRecord record{true_phase, seed, {}};
  record.outcomes.reserve(shots);
  for (std::size_t shot = 1; shot <= shots; ++shot) {
    const double u = uniform01(rng) * total;
    auto pick = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                         cumulative.begin());
    pick = std::min(pick, outcomes.size() - 1);
    // Skip zero-width bins that upper_bound can land on at the top edge.
    while (pick > 0 && cumulative[pick] == cumulative[pick - 1]) --pick;
    record.outcomes.push_back(outcomes[pick]);
    running.update(outcomes[pick]);
    if (observer) observer(shot, running.posterior());
  }

  PhasePosterior final_posterior = running.posterior();
  count_peaks(final_posterior);
  return {std::move(record), std::move(final_posterior)};
}

}  // namespace mzfid
