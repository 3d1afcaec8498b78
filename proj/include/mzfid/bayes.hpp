#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mzfid/optics.hpp"
#include "mzfid/phase_grid.hpp"

namespace mzfid {

/// Relative height below which a local maximum is treated as quadrature ripple.
inline constexpr double kPeakThreshold = 1e-9;

/// Densities closer than this fraction of the maximum count as equal when merging plateaus.
inline constexpr double kPlateauTolerance = 1e-12;

struct Peak {
  double phi = 0.0;
  double height = 0.0;
};

/// Posterior density p(phi | m) under a uniform prior on (-pi, pi].
struct PhasePosterior {
  PhaseGrid grid;
  std::vector<double> density;
  Outcome outcome;
  std::vector<Peak> peaks;  // filled by count_peaks

  /// Trapezoid integral of the density; 1 for a normalized posterior.
  double total_mass() const;
};

/// Normalizes one likelihood row into a posterior. Throws ImpossibleOutcome when the
/// row is zero everywhere.
PhasePosterior posterior_density(std::span<const double> likelihood_row, const PhaseGrid& grid,
                                 Outcome outcome = {});

PhasePosterior posterior_density(const LikelihoodTable& table, Outcome outcome);

/// Counts local maxima on the periodic grid. A run of equal values (equal within
/// kPlateauTolerance of the maximum) is one candidate, placed at the run midpoint, and it
/// is a peak when it is strictly above both cyclic neighbours and above kPeakThreshold
/// times the global maximum. Peaks are stored on
/// the posterior in increasing phi. A constant density counts as a single peak.
int count_peaks(PhasePosterior& posterior, double relative_threshold = kPeakThreshold);

struct CircularSummary {
  double mean = 0.0;
  double stddev = 0.0;
  double resultant_length = 0.0;
};

/// Circular mean arg(R) and standard deviation sqrt(-2 ln|R|), R = E[e^{i phi}].
/// Throws DomainError when |R| < 1e-12 (mean undefined).
CircularSummary circular_summary(const PhasePosterior& posterior);

struct MeasurementRecord {
  double true_phase = 0.0;
  std::uint64_t seed = 0;
  std::vector<Outcome> outcomes;
};

/// Running posterior for i.i.d. outcomes. Log-likelihoods are accumulated so the result
/// does not underflow over long records.
class SequentialPosterior {
 public:
  explicit SequentialPosterior(LikelihoodTable table);

  void update(Outcome outcome);
  std::size_t updates() const { return updates_; }
  const LikelihoodTable& table() const { return table_; }

  /// Current posterior; throws ImpossibleOutcome if the record has zero likelihood everywhere.
  PhasePosterior posterior() const;

 private:
  LikelihoodTable table_;
  std::vector<double> log_likelihood_;
  Outcome last_{};
  std::size_t updates_ = 0;
};

struct SimulationResult {
  MeasurementRecord record;
  PhasePosterior final_posterior;
};

/// Called after every shot with the 1-based shot index and the running posterior.
using PosteriorObserver = std::function<void(std::size_t, const PhasePosterior&)>;

/// Draws `shots` outcomes from P(m | true_phase) with a seeded mt19937_64 and updates the
/// running posterior after each one. Deterministic for a fixed seed.
SimulationResult simulate_sequence(const StateCoefficients& state, const InterferometerGeometry& geometry,
                                   double true_phase, std::size_t shots, std::uint64_t seed,
                                   std::size_t grid_size = 8192, const PosteriorObserver& observer = {});

}  // namespace mzfid
