#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mzfid/optics.hpp"

namespace mzfid {

/// Scales to unit norm and rotates the global phase so the first nonzero coefficient is
/// real and non-negative. Throws DomainError for a zero (or non-finite) vector.
StateCoefficients project_normalize(std::span<const Complex> raw, std::string label = "custom");

struct OptimizerConfig {
  /// Total restarts including the Fock and N00N seeds; must be at least 2.
  int restarts = 16;
  std::size_t max_iterations = 2000;
  double tolerance = 1e-7;  // bits
  std::uint64_t seed = 0;
  std::size_t search_grid = 4096;
  std::size_t report_grid = 8192;
  InterferometerGeometry geometry{};
};

struct RestartSummary {
  int index = 0;
  std::string start;  // "fock", "noon" or "random"
  double best_h = 0.0;  // on the search grid
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct OptimizationResult {
  StateCoefficients best_state;
  double best_h = 0.0;         // re-evaluated on the report grid
  double search_h = 0.0;       // value found on the search grid
  int best_restart = 0;
  std::vector<RestartSummary> history;
  std::size_t evaluations = 0;
};

using RestartObserver = std::function<void(const RestartSummary&)>;

/// Maximizes H(Phi:M) over the N+1 complex input coefficients with a Nelder-Mead search
/// in the 2(N+1) real and imaginary parts. Restart 0 starts at the Fock state, restart 1
/// at the N00N state, the rest at seeded Gaussian points.
OptimizationResult optimize_input_state(int photons, const OptimizerConfig& config = {},
                                        const RestartObserver& observer = {});

}  // namespace mzfid
