#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mzfid/optics.hpp"

namespace mzfid {

/// Shannon mutual information H(Phi:M) between a uniformly distributed phase and the
/// measurement outcome, in bits per use of the interferometer.
struct FidelityReport {
  double h_bits = 0.0;
  std::string state_label;
  int photons = 0;
  std::size_t grid_size = 0;
  std::size_t outcome_count = 0;
};

inline constexpr std::size_t kDefaultGridSize = 8192;
inline constexpr std::size_t kDefaultCountVectorCap = 1'000'000;

/// Column sums of the table must equal 1 within this tolerance.
inline constexpr double kTableNormTolerance = 1e-9;

/// Trapezoid evaluation of
///   H = (1/2pi) sum_m  int P(m|phi) log2[ 2pi P(m|phi) / int P(m|phi') dphi' ] dphi
/// on the table's periodic grid, with 0 log 0 = 0. Throws DomainError for an
/// unnormalized table.
FidelityReport mutual_information(const LikelihoodTable& table);

/// H for the named family at one photon number, equal arms.
FidelityReport family_fidelity(const std::string& family, int photons, std::size_t grid_size = kDefaultGridSize);

/// One report per N = 1..n_max for "fock" or "noon".
std::vector<FidelityReport> fidelity_sweep(const std::string& family, int n_max,
                                           std::size_t grid_size = kDefaultGridSize);

/// One report per explicit state, in the given order.
std::vector<FidelityReport> fidelity_sweep(const std::vector<StateCoefficients>& states,
                                           std::size_t grid_size = kDefaultGridSize,
                                           const InterferometerGeometry& geometry = {});

/// Mutual information between the phase and the outcome counts of `repeats`
/// independent uses. Count vectors {M_m} with sum M_m = repeats are enumerated
/// exactly, each with likelihood repeats!/prod(M_m!) prod P(m|phi)^{M_m}.
/// Throws ResourceLimit when there would be more than `cap` count vectors.
FidelityReport repeated_mutual_information(const LikelihoodTable& single_shot, int repeats,
                                           std::size_t cap = kDefaultCountVectorCap);

/// Number of count vectors for `outcomes` categories and `repeats` draws, saturating
/// at SIZE_MAX.
std::size_t count_vector_total(std::size_t outcomes, int repeats);

enum class Observable { kNc, kNd, kDifference };

Observable parse_observable(const std::string& name);
std::string observable_name(Observable observable);

/// Linear error propagation delta_phi = delta_m / |d<m>/dphi|.
struct SensitivityEstimate {
  double delta_phi = 0.0;
  double delta_m = 0.0;
  double slope = 0.0;
  double mean = 0.0;
  double working_point = 0.0;
};

inline constexpr double kSlopeStep = 1e-5;
inline constexpr double kStationarySlope = 1e-12;

/// Mean and variance come from the exact likelihoods; the slope is a central difference
/// with step kSlopeStep. Throws DomainError ("stationary point") when |slope| < 1e-12.
SensitivityEstimate error_propagation_sensitivity(const StateCoefficients& state,
                                                  const InterferometerGeometry& geometry,
                                                  Observable observable, double working_point);

inline double standard_limit(int photons) { return 1.0 / std::sqrt(static_cast<double>(photons)); }
inline double heisenberg_limit(int photons) { return 1.0 / static_cast<double>(photons); }

}  // namespace mzfid
