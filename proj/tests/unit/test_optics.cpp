#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "mzfid/errors.hpp"
#include "mzfid/optics.hpp"
#include "mzfid/random.hpp"
#include "oracles.hpp"

namespace mzfid {
namespace {

constexpr double kPi = std::numbers::pi;

StateCoefficients random_state(int photons, Rng& rng) {
  std::vector<Complex> c(static_cast<std::size_t>(photons) + 1);
  double norm = 0.0;
  for (auto& z : c) {
    z = {standard_normal(rng), standard_normal(rng)};
    norm += std::norm(z);
  }
  for (auto& z : c) z /= std::sqrt(norm);
  return StateCoefficients(std::move(c), "random");
}

TEST(ScatteringMatrix, BalancedArmsAtZeroPhaseIsMinusISigmaX) {
  const auto s = build_scattering_matrix(0.0);
  EXPECT_NEAR(std::abs(s(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(0, 1) - Complex(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 0) - Complex(0, -1)), 0.0, 1e-15);
  // A single photon in port a leaves through d.
  EXPECT_NEAR(std::norm(transition_amplitude(s, 1, 0, 0, 1)), 1.0, 1e-15);
}

TEST(ScatteringMatrix, BalancedArmsAtPiIsMinusSigmaZ) {
  const auto s = build_scattering_matrix(kPi);
  EXPECT_NEAR(std::abs(s(0, 0) - Complex(-1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 1) - Complex(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(transition_amplitude(s, 1, 0, 1, 0)), 1.0, 1e-15);
}

TEST(ScatteringMatrix, MatchesEntrywiseOracle) {
  for (double phi : {-2.9, -1.0, 0.3, 1.7, kPi}) {
    for (auto [kl1, kl2] : {std::pair{0.0, 0.0}, std::pair{0.4, -1.3}}) {
      const auto s = build_scattering_matrix(phi, {kl1, kl2});
      const auto o = oracle::scattering(phi, kl1, kl2);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(s(i, j) - o[i][j]), 0.0, 1e-15);
      }
    }
  }
}

TEST(ScatteringMatrix, UnitaryForRandomPhases) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const double phi = (2.0 * uniform01(rng) - 1.0) * 10.0;
    const InterferometerGeometry g{uniform01(rng) * 6.0, uniform01(rng) * 6.0};
    const auto s = build_scattering_matrix(phi, g);
    ASSERT_LT(s.unitarity_defect(), 1e-12) << "phi=" << phi;
    ASSERT_NEAR(std::abs(s.determinant()), 1.0, 1e-12);
  }
}

TEST(ScatteringMatrix, RejectsNonFiniteInput) {
  EXPECT_THROW(build_scattering_matrix(std::nan("")), InvalidArgument);
  EXPECT_THROW(build_scattering_matrix(INFINITY), InvalidArgument);
  EXPECT_THROW(build_scattering_matrix(0.0, {std::nan(""), 0.0}), InvalidArgument);
}

TEST(StateCoefficients, FactoriesAndValidation) {
  const auto fock = StateCoefficients::fock(3);
  EXPECT_EQ(fock.photons(), 3);
  EXPECT_EQ(fock[3], Complex(1.0));
  const auto noon = StateCoefficients::noon(2);
  EXPECT_NEAR(std::norm(noon[0]) + std::norm(noon[2]), 1.0, 1e-15);
  EXPECT_EQ(noon.label(), "noon");
  EXPECT_THROW(StateCoefficients({1.0, 1.0}, "x"), InvalidArgument);
  EXPECT_THROW(StateCoefficients({}, "x"), InvalidArgument);
  EXPECT_THROW(StateCoefficients::noon(0), InvalidArgument);
  EXPECT_THROW(StateCoefficients::fock(-1), InvalidArgument);
}

TEST(FockOutcomeProb, Examples) {
  EXPECT_DOUBLE_EQ(fock_outcome_prob(1, {0, 1}, 0.0), 1.0);
  EXPECT_NEAR(fock_outcome_prob(2, {1, 1}, kPi / 2), 0.5, 1e-15);
  for (double phi : {-1.0, 0.0, 0.5, 2.0}) EXPECT_EQ(fock_outcome_prob(3, {1, 1}, phi), 0.0);
  EXPECT_THROW(fock_outcome_prob(2, {-1, 3}, 0.0), InvalidArgument);
}

TEST(FockOutcomeProb, NoOverflowAtFortyPhotons) {
  double total = 0.0;
  for (const auto& o : outcomes_for(40)) {
    const double p = fock_outcome_prob(40, o, 1.1);
    ASSERT_TRUE(std::isfinite(p));
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(FockOutcomeProb, SwapSymmetry) {
  for (int n = 0; n <= 12; ++n) {
    for (const auto& o : outcomes_for(n)) {
      for (double phi : {-2.5, -0.7, 0.0, 0.4, 1.9}) {
        EXPECT_NEAR(fock_outcome_prob(n, o, phi), fock_outcome_prob(n, {o.n_d, o.n_c}, phi + kPi), 1e-13);
        EXPECT_NEAR(fock_outcome_prob(n, o, phi), fock_outcome_prob(n, {o.n_d, o.n_c}, phi - kPi), 1e-13);
      }
    }
  }
}

TEST(NoonOutcomeProb, Examples) {
  EXPECT_NEAR(noon_outcome_prob(1, {1, 0}, 0.0), 0.5, 1e-15);
  for (double phi : {-3.0, -1.0, 0.0, 0.7, kPi}) {
    EXPECT_NEAR(noon_outcome_prob(2, {1, 1}, phi), 0.0, 1e-30);
    EXPECT_NEAR(noon_outcome_prob(1, {1, 0}, phi), 0.5 * (1.0 - std::sin(phi)), 1e-15);
  }
  EXPECT_THROW(noon_outcome_prob(0, {0, 0}, 0.0), InvalidArgument);
}

TEST(NoonOutcomeProb, SingleOutcomeIntegratesToPi) {
  // Composite Simpson on (-pi, pi] as an independent check of (1 - sin phi) / 2.
  const int n = 20000;
  const double h = 2.0 * kPi / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * noon_outcome_prob(1, {1, 0}, -kPi + k * h);
  }
  EXPECT_NEAR(sum * h / 3.0, kPi, 1e-10);
}

TEST(TransitionAmplitude, SinglePhotonIsMatrixElement) {
  const auto s = build_scattering_matrix(0.83, {0.2, -0.5});
  EXPECT_NEAR(std::abs(transition_amplitude(s, 1, 0, 1, 0) - s(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(transition_amplitude(s, 1, 0, 0, 1) - s(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(transition_amplitude(s, 0, 1, 1, 0) - s(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(transition_amplitude(s, 0, 1, 0, 1) - s(1, 1)), 0.0, 1e-15);
  EXPECT_EQ(transition_amplitude(s, 0, 0, 0, 0), Complex(1.0));
}

TEST(TransitionAmplitude, RejectsPhotonMismatch) {
  const auto s = build_scattering_matrix(0.1);
  EXPECT_THROW(transition_amplitude(s, 2, 1, 1, 1), DomainError);
  EXPECT_THROW(transition_amplitude(s, -1, 1, 0, 0), InvalidArgument);
}

TEST(TransitionAmplitude, MatchesPermanentOracle) {
  for (double phi : {-2.2, 0.0, 0.9, 2.8}) {
    for (auto [kl1, kl2] : {std::pair{0.0, 0.0}, std::pair{1.1, 0.3}}) {
      const auto s = build_scattering_matrix(phi, {kl1, kl2});
      const auto o = oracle::scattering(phi, kl1, kl2);
      for (int n = 0; n <= 6; ++n) {
        for (int n_a = 0; n_a <= n; ++n_a) {
          for (int n_c = 0; n_c <= n; ++n_c) {
            const Complex got = transition_amplitude(s, n_a, n - n_a, n_c, n - n_c);
            const Complex want = oracle::permanent_amplitude(o, n_a, n - n_a, n_c, n - n_c);
            ASSERT_NEAR(std::abs(got - want), 0.0, 1e-13)
                << "phi=" << phi << " in=(" << n_a << "," << n - n_a << ") out=(" << n_c << "," << n - n_c << ")";
          }
        }
      }
    }
  }
}

TEST(StateOutcomeProb, ReducesToClosedForms) {
  const PhaseGrid grid(64);
  for (int n = 1; n <= 12; ++n) {
    const auto fock = StateCoefficients::fock(n);
    const auto noon = StateCoefficients::noon(n);
    for (const auto& o : outcomes_for(n)) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double phi = grid.point(k);
        ASSERT_NEAR(state_outcome_prob(fock, phi, {}, o), fock_outcome_prob(n, o, phi), 1e-12);
        ASSERT_NEAR(state_outcome_prob(noon, phi, {}, o), noon_outcome_prob(n, o, phi), 1e-12);
      }
    }
  }
}

TEST(StateOutcomeProb, MismatchedOutcomeIsDomainError) {
  EXPECT_THROW(state_outcome_prob(StateCoefficients::fock(3), 0.2, {}, {1, 1}), DomainError);
}

TEST(StateOutcomeProb, CompletenessForRandomStates) {
  Rng rng(7);
  for (int n = 0; n <= 25; n += 5) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto state = random_state(n, rng);
      const InterferometerGeometry g{uniform01(rng), uniform01(rng)};
      for (double phi : {-3.0, -0.2, 1.4}) {
        double total = 0.0;
        for (const auto& o : outcomes_for(n)) {
          const double p = state_outcome_prob(state, phi, g, o);
          ASSERT_GE(p, 0.0);
          ASSERT_LE(p, 1.0 + 1e-12);
          total += p;
        }
        ASSERT_NEAR(total, 1.0, 1e-12) << "N=" << n;
      }
    }
  }
}

TEST(PhaseResponse, AgreesWithDirectAmplitudeSum) {
  Rng rng(99);
  for (int n : {0, 1, 2, 5, 9}) {
    const InterferometerGeometry g{0.7, -0.4};
    const TransferExpansion expansion(n, g);
    for (int trial = 0; trial < 3; ++trial) {
      const auto state = random_state(n, rng);
      const PhaseResponse response = expansion.expand(state);
      for (double phi : {-2.0, 0.0, 0.3, 3.0}) {
        for (const auto& o : outcomes_for(n)) {
          ASSERT_NEAR(response.probability(o.n_c, phi), state_outcome_prob(state, phi, g, o), 1e-12);
        }
      }
    }
  }
}

TEST(TransferExpansion, RejectsWrongLength) {
  const TransferExpansion expansion(3, {});
  const std::vector<Complex> coeffs(2, 0.5);
  EXPECT_THROW(expansion.expand(coeffs), DomainError);
}

TEST(LikelihoodTable, SinglePhotonFockOnFourPoints) {
  const auto table = likelihood_table(StateCoefficients::fock(1), {}, 4);
  ASSERT_EQ(table.rows(), 2u);
  ASSERT_EQ(table.columns(), 4u);
  const double expected_phi[] = {-kPi / 2, 0.0, kPi / 2, kPi};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(table.grid().point(k), expected_phi[k], 1e-15);
    const double s = std::sin(expected_phi[k] / 2);
    const double c = std::cos(expected_phi[k] / 2);
    // Rows are ordered by n_c: (0,1) then (1,0).
    EXPECT_NEAR(table(0, k), c * c, 1e-14);
    EXPECT_NEAR(table(1, k), s * s, 1e-14);
  }
}

TEST(LikelihoodTable, ColumnsSumToOne) {
  Rng rng(5);
  for (int n : {0, 3, 10, 25}) {
    const auto table = likelihood_table(random_state(n, rng), {0.3, 0.1}, 512);
    EXPECT_LT(table.normalization_defect(), 1e-10);
  }
}

TEST(LikelihoodTable, FockTwentyFiveHasSymmetricMaximaForFourTwentyOne) {
  const auto table = likelihood_table(StateCoefficients::fock(25), {}, 8192);
  const auto row = table.row(4);
  ASSERT_EQ(table.outcomes()[4], (Outcome{4, 21}));
  const double target = 2.0 * std::atan(std::sqrt(4.0 / 21.0));
  const double step = table.grid().weight();

  // Amplitudes carry ~1e-16 absolute rounding, so the far tail (P < 1e-30) is noise.
  const double floor = 1e-9 * *std::max_element(row.begin(), row.end());
  std::vector<std::size_t> maxima;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double prev = row[(k + row.size() - 1) % row.size()];
    const double next = row[(k + 1) % row.size()];
    if (row[k] > prev && row[k] >= next && row[k] > floor) maxima.push_back(k);
  }
  ASSERT_EQ(maxima.size(), 2u);
  EXPECT_NEAR(table.grid().point(maxima[0]), -target, step);
  EXPECT_NEAR(table.grid().point(maxima[1]), target, step);
  EXPECT_NEAR(row[maxima[0]], row[maxima[1]], 1e-14);
}

TEST(LikelihoodTable, RejectsTinyGrid) {
  EXPECT_THROW(likelihood_table(StateCoefficients::fock(1), {}, 1), InvalidArgument);
}

}  // namespace
}  // namespace mzfid
