#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mzfid/phase_grid.hpp"

namespace mzfid {

using Complex = std::complex<double>;

/// Optical phases k*L1 (upper arm) and k*L2 (lower arm). Equal arms are the default.
struct InterferometerGeometry {
  double kl1 = 0.0;
  double kl2 = 0.0;
};

/// Photon counts registered at output ports c and d.
struct Outcome {
  int n_c = 0;
  int n_d = 0;

  int total() const { return n_c + n_d; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// All N+1 outcomes for N photons, ordered by n_c = 0..N.
std::vector<Outcome> outcomes_for(int photons);

/// 2x2 lossless Mach-Zehnder scattering matrix b_i = sum_j S_ij a_j.
class ScatteringMatrix {
 public:
  ScatteringMatrix(std::array<std::array<Complex, 2>, 2> entries, double phase)
      : entries_(entries), phase_(phase) {}

  /// Zero-based element access: (0,0) is S_11.
  const Complex& operator()(int i, int j) const { return entries_[i][j]; }
  double phase() const { return phase_; }
  Complex determinant() const;

  /// Largest entrywise deviation of S^dagger S from the identity.
  double unitarity_defect() const;

 private:
  std::array<std::array<Complex, 2>, 2> entries_;
  double phase_;
};

ScatteringMatrix build_scattering_matrix(double phi, const InterferometerGeometry& geometry = {});

/// Normalized amplitudes c_n over the two-mode basis |n_a, (N-n)_b>, n = 0..N.
class StateCoefficients {
 public:
  /// Validates length and unit norm (1e-12); throws InvalidArgument otherwise.
  StateCoefficients(std::vector<Complex> coeffs, std::string label);

  /// |N_a, 0_b>, i.e. c_N = 1.
  static StateCoefficients fock(int photons);
  /// (|N_a, 0_b> + |0_a, N_b>) / sqrt(2). Requires N >= 1.
  static StateCoefficients noon(int photons);

  int photons() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  const Complex& operator[](std::size_t n) const { return coeffs_[n]; }
  const std::string& label() const { return label_; }

 private:
  std::vector<Complex> coeffs_;
  std::string label_;
};

inline constexpr double kProbabilityFloor = 1e-300;

/// Polynomial coefficients smaller than this fraction of the terms that produced them
/// are rounding residue and are set to zero.
inline constexpr double kCancellationTolerance = 64 * std::numeric_limits<double>::epsilon();

/// Closed-form likelihood for |N_a, 0_b> with equal arms.
double fock_outcome_prob(int photons, Outcome outcome, double phi);

/// Closed-form likelihood for the N00N input with equal arms.
double noon_outcome_prob(int photons, Outcome outcome, double phi);

/// Amplitudes <n_c, N - n_c| U(S) |n_a, n_b> for n_c = 0..N under
///   a^dagger -> S_11 c^dagger + S_21 d^dagger,  b^dagger -> S_12 c^dagger + S_22 d^dagger.
/// Photons are added one at a time, which keeps every intermediate vector normalized.
std::vector<Complex> output_amplitudes(const ScatteringMatrix& s, int n_a, int n_b);

/// Single entry of output_amplitudes. Throws DomainError when n_a + n_b != n_c + n_d.
Complex transition_amplitude(const ScatteringMatrix& s, int n_a, int n_b, int n_c, int n_d);

/// P(n_c, N - n_c | phi) for every n_c, from the coherent sum over input coefficients.
std::vector<double> state_output_probs(const StateCoefficients& state, double phi,
                                       const InterferometerGeometry& geometry);

/// |sum_n c_n A(n, N-n -> n_c, n_d)|^2 for one outcome.
double state_outcome_prob(const StateCoefficients& state, double phi,
                          const InterferometerGeometry& geometry, Outcome outcome);

/// Output amplitude of every outcome as a trigonometric polynomial in phi.
///
/// Each entry of S is affine in e^{i phi}, so an N-photon amplitude is a polynomial of
/// degree N in e^{i phi}. The coefficients are recovered exactly from N+1 equispaced
/// samples of the transition amplitudes.
class PhaseResponse {
 public:
  PhaseResponse(int photons, std::vector<Complex> coefficients);

  int photons() const { return photons_; }
  /// Coefficient of e^{i j phi} in the amplitude of outcome (n_c, N - n_c).
  const Complex& coefficient(int n_c, int j) const {
    return coefficients_[static_cast<std::size_t>(n_c) * stride() + static_cast<std::size_t>(j)];
  }
  Complex amplitude(int n_c, double phi) const;
  double probability(int n_c, double phi) const;

 private:
  std::size_t stride() const { return static_cast<std::size_t>(photons_) + 1; }

  int photons_;
  std::vector<Complex> coefficients_;  // (N+1) x (N+1), row = n_c, column = power of e^{i phi}
};

/// Phase responses of every basis input |n, N-n> for a fixed photon number and geometry.
/// Building one costs O(N^4); expanding a state afterwards costs O(N^3).
class TransferExpansion {
 public:
  TransferExpansion(int photons, const InterferometerGeometry& geometry);

  int photons() const { return photons_; }
  const InterferometerGeometry& geometry() const { return geometry_; }

  PhaseResponse expand(std::span<const Complex> coeffs) const;
  PhaseResponse expand(const StateCoefficients& state) const { return expand(state.coeffs()); }

 private:
  int photons_;
  InterferometerGeometry geometry_;
  std::vector<Complex> basis_;     // [n][n_c][j]
  std::vector<double> magnitude_;  // [n][n_c], mean |amplitude| over the DFT samples
};

/// P(m | phi_k) for all N+1 outcomes on a periodic phase grid, row-major by outcome.
class LikelihoodTable {
 public:
  LikelihoodTable(PhaseGrid grid, std::vector<Outcome> outcomes, std::vector<double> values,
                  std::string label, int photons);

  const PhaseGrid& grid() const { return grid_; }
  std::size_t rows() const { return outcomes_.size(); }
  std::size_t columns() const { return grid_.size(); }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * columns(), columns());
  }
  double operator()(std::size_t r, std::size_t k) const { return values_[r * columns() + k]; }
  const std::string& label() const { return label_; }
  int photons() const { return photons_; }

  /// Largest |sum_m P(m|phi_k) - 1| over the grid.
  double normalization_defect() const;

 private:
  PhaseGrid grid_;
  std::vector<Outcome> outcomes_;
  std::vector<double> values_;
  std::string label_;
  int photons_;
};

/// Tabulates a phase response; the grid must have at least two points.
LikelihoodTable likelihood_table(const PhaseResponse& response, std::size_t grid_size,
                                 std::string label = "custom");

LikelihoodTable likelihood_table(const StateCoefficients& state,
                                 const InterferometerGeometry& geometry, std::size_t grid_size);

}  // namespace mzfid
