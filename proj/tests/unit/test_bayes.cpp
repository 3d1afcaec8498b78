#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "mzfid/bayes.hpp"
#include "mzfid/errors.hpp"
#include "mzfid/optics.hpp"

namespace mzfid {
namespace {

constexpr double kPi = std::numbers::pi;

// Zero-probability N00N outcomes: N/2 odd, n_c = n_d.
bool noon_impossible(int photons, const Outcome& o) { return o.n_c == o.n_d && (o.n_c % 2) == 1; }

TEST(PosteriorDensity, SinglePhotonMatchesClosedForm) {
  const auto table = likelihood_table(StateCoefficients::fock(1), {}, 1024);
  const auto post = posterior_density(table, {0, 1});
  const auto& grid = post.grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double c = std::cos(grid.point(k) / 2.0);
    EXPECT_NEAR(post.density[k], c * c / kPi, 1e-12);
  }
  EXPECT_NEAR(post.total_mass(), 1.0, 1e-12);
}

TEST(PosteriorDensity, ConstantRowGivesUniformPosterior) {
  const PhaseGrid grid(64);
  const std::vector<double> row(grid.size(), 0.25);
  const auto post = posterior_density(row, grid);
  for (double d : post.density) EXPECT_NEAR(d, 1.0 / (2.0 * kPi), 1e-15);
}

TEST(PosteriorDensity, AllZeroRowIsImpossibleOutcome) {
  const PhaseGrid grid(16);
  const std::vector<double> row(grid.size(), 0.0);
  EXPECT_THROW(posterior_density(row, grid), ImpossibleOutcome);
}

TEST(PosteriorDensity, NoonCancellationIsImpossible) {
  for (int n : {2, 6, 10}) {
    const auto table = likelihood_table(StateCoefficients::noon(n), {}, 512);
    EXPECT_THROW(posterior_density(table, {n / 2, n / 2}), ImpossibleOutcome) << "N=" << n;
  }
}

TEST(PosteriorDensity, RejectsForeignOutcomeAndLengthMismatch) {
  const auto table = likelihood_table(StateCoefficients::fock(3), {}, 64);
  EXPECT_THROW(posterior_density(table, {1, 1}), DomainError);
  const std::vector<double> row(10, 1.0);
  EXPECT_THROW(posterior_density(row, PhaseGrid(12)), InvalidArgument);
}

TEST(PosteriorDensity, NormalizedForEveryOutcome) {
  for (int n = 1; n <= 25; ++n) {
    for (const auto* family : {"fock", "noon"}) {
      const auto state = std::string(family) == "fock" ? StateCoefficients::fock(n) : StateCoefficients::noon(n);
      const auto table = likelihood_table(state, {}, 2048);
      for (const auto& o : table.outcomes()) {
        if (std::string(family) == "noon" && noon_impossible(n, o)) continue;
        const auto post = posterior_density(table, o);
        EXPECT_NEAR(post.total_mass(), 1.0, 1e-10);
        EXPECT_GE(*std::min_element(post.density.begin(), post.density.end()), 0.0);
      }
    }
  }
}

TEST(CountPeaks, FockFourTwentyOneHasTwoSymmetricPeaks) {
  const auto table = likelihood_table(StateCoefficients::fock(25), {}, 8192);
  auto post = posterior_density(table, {4, 21});
  ASSERT_EQ(count_peaks(post), 2);
  const double expected = 2.0 * std::atan(std::sqrt(4.0 / 21.0));
  const double step = post.grid.weight();
  EXPECT_NEAR(post.peaks[0].phi, -expected, step);
  EXPECT_NEAR(post.peaks[1].phi, expected, step);
  EXPECT_NEAR(expected, 0.823, 1e-3);
}

TEST(CountPeaks, FockAllPhotonsInCPeaksOnceAtPi) {
  const auto table = likelihood_table(StateCoefficients::fock(25), {}, 8192);
  auto post = posterior_density(table, {25, 0});
  ASSERT_EQ(count_peaks(post), 1);
  EXPECT_DOUBLE_EQ(post.peaks[0].phi, kPi);
}

TEST(CountPeaks, RangesOverAllOutcomes) {
  for (int n = 1; n <= 25; ++n) {
    const auto fock = likelihood_table(StateCoefficients::fock(n), {}, 8192);
    const auto noon = likelihood_table(StateCoefficients::noon(n), {}, 8192);
    for (const auto& o : fock.outcomes()) {
      auto pf = posterior_density(fock, o);
      const int cf = count_peaks(pf);
      EXPECT_TRUE(cf == 1 || cf == 2) << "fock N=" << n << " (" << o.n_c << "," << o.n_d << ") -> " << cf;
      if (noon_impossible(n, o)) continue;
      auto pn = posterior_density(noon, o);
      const int cn = count_peaks(pn);
      EXPECT_TRUE(cn >= 1 && cn <= 4) << "noon N=" << n << " (" << o.n_c << "," << o.n_d << ") -> " << cn;
    }
  }
}

TEST(CountPeaks, NoonHasAtLeastAsManyPeaksAsFockForFourTwentyOne) {
  auto pf = posterior_density(likelihood_table(StateCoefficients::fock(25), {}, 8192), {4, 21});
  auto pn = posterior_density(likelihood_table(StateCoefficients::noon(25), {}, 8192), {4, 21});
  EXPECT_GE(count_peaks(pn), count_peaks(pf));
}

TEST(CountPeaks, PeaksNarrowWithPhotonNumber) {
  double previous = 0.0;
  for (int n = 1; n <= 25; ++n) {
    const auto table = likelihood_table(StateCoefficients::fock(n), {}, 4096);
    auto post = posterior_density(table, {0, n});
    EXPECT_EQ(count_peaks(post), 1);
    const double height = post.density[post.grid.nearest(0.0)];
    EXPECT_GT(height, previous) << "N=" << n;
    previous = height;
  }
}

TEST(CountPeaks, PlateauCountsOnceAtItsMidpoint) {
  const PhaseGrid grid(12);
  std::vector<double> row = {0, 1, 2, 3, 3, 3, 2, 1, 0, 0, 0, 0};
  auto post = posterior_density(row, grid);
  ASSERT_EQ(count_peaks(post), 1);
  EXPECT_NEAR(post.peaks[0].phi, grid.point(4), 1e-15);
}

TEST(CountPeaks, WrapsAroundThePeriodicBoundary) {
  const PhaseGrid grid(8);
  // Maximum straddles the seam between the last (pi) and first grid point.
  std::vector<double> row = {4, 2, 1, 0.5, 0.5, 1, 2, 4};
  auto post = posterior_density(row, grid);
  EXPECT_EQ(count_peaks(post), 1);
}

TEST(CountPeaks, IgnoresRippleBelowThreshold) {
  const PhaseGrid grid(8);
  std::vector<double> row = {1, 0, 1e-10, 0, 0, 0, 0, 0};
  auto post = posterior_density(row, grid);
  EXPECT_EQ(count_peaks(post), 1);
  EXPECT_EQ(count_peaks(post, 1e-11), 2);
}

TEST(CountPeaks, ConstantDensityIsOnePeak) {
  const PhaseGrid grid(16);
  auto post = posterior_density(std::vector<double>(grid.size(), 1.0), grid);
  EXPECT_EQ(count_peaks(post), 1);
}

TEST(CircularSummary, ConcentratedPosterior) {
  const PhaseGrid grid(1000);
  std::vector<double> row(grid.size(), 0.0);
  const std::size_t k = grid.nearest(1.2);
  row[k] = 1.0;
  const auto s = circular_summary(posterior_density(row, grid));
  EXPECT_NEAR(s.mean, grid.point(k), 1e-12);
  EXPECT_NEAR(s.stddev, 0.0, 1e-6);
}

TEST(CircularSummary, UniformPosteriorHasNoMean) {
  const PhaseGrid grid(64);
  EXPECT_THROW(circular_summary(posterior_density(std::vector<double>(grid.size(), 1.0), grid)), DomainError);
}

TEST(CircularSummary, SymmetricTwoPeakPosteriorIsWide) {
  const auto table = likelihood_table(StateCoefficients::fock(25), {}, 8192);
  const auto s = circular_summary(posterior_density(table, {4, 21}));
  EXPECT_NEAR(s.mean, 0.0, 1e-9);
  // Each mode is narrow, but the width statistic sees the +-0.82 rad split.
  EXPECT_GT(s.stddev, 0.7);
}

TEST(SimulateSequence, RejectsZeroShotsAndNonFinitePhase) {
  EXPECT_THROW(simulate_sequence(StateCoefficients::fock(1), {}, 0.1, 0, 1), InvalidArgument);
  EXPECT_THROW(simulate_sequence(StateCoefficients::fock(1), {}, std::nan(""), 1, 1), InvalidArgument);
}

TEST(SimulateSequence, DeterministicForSeed) {
  const auto state = StateCoefficients::noon(3);
  const auto a = simulate_sequence(state, {}, 0.4, 200, 99, 512);
  const auto b = simulate_sequence(state, {}, 0.4, 200, 99, 512);
  ASSERT_EQ(a.record.outcomes, b.record.outcomes);
  EXPECT_EQ(a.final_posterior.density, b.final_posterior.density);
  const auto c = simulate_sequence(state, {}, 0.4, 200, 100, 512);
  EXPECT_NE(a.record.outcomes, c.record.outcomes);
}

TEST(SimulateSequence, SinglePhotonFrequencyWithinThreeSigma) {
  const auto r = simulate_sequence(StateCoefficients::fock(1), {}, kPi / 2, 10000, 2024, 256);
  const auto hits = std::count(r.record.outcomes.begin(), r.record.outcomes.end(), Outcome{1, 0});
  const double freq = static_cast<double>(hits) / 1e4;
  EXPECT_NEAR(freq, 0.5, 3.0 * std::sqrt(0.25 / 1e4));
}

TEST(SimulateSequence, OneShotEqualsSingleUpdate) {
  const auto state = StateCoefficients::fock(5);
  const auto r = simulate_sequence(state, {}, 1.0, 1, 5, 1024);
  ASSERT_EQ(r.record.outcomes.size(), 1u);
  const auto direct = posterior_density(likelihood_table(state, {}, 1024), r.record.outcomes[0]);
  for (std::size_t k = 0; k < direct.density.size(); ++k) {
    EXPECT_NEAR(r.final_posterior.density[k], direct.density[k], 1e-12 * (1.0 + direct.density[k]));
  }
}

TEST(SimulateSequence, NoonTwoNeverYieldsOneOne) {
  const auto r = simulate_sequence(StateCoefficients::noon(2), {}, 0.9, 2000, 3, 256);
  EXPECT_EQ(std::count(r.record.outcomes.begin(), r.record.outcomes.end(), Outcome{1, 1}), 0);
}

TEST(SimulateSequence, SinglePhotonConcentratesOnSignAmbiguousPair) {
  const double truth = 1.1;
  const auto r = simulate_sequence(StateCoefficients::fock(1), {}, truth, 5000, 11, 4096);
  auto post = r.final_posterior;
  ASSERT_EQ(count_peaks(post), 2);
  EXPECT_NEAR(post.peaks[0].phi, -truth, 0.05);
  EXPECT_NEAR(post.peaks[1].phi, truth, 0.05);
}

TEST(SimulateSequence, ObserverSeesEveryShot) {
  std::size_t calls = 0;
  simulate_sequence(StateCoefficients::fock(2), {}, 0.3, 17, 1, 64,
                    [&](std::size_t shot, const PhasePosterior& p) {
                      EXPECT_EQ(shot, calls + 1);
                      EXPECT_NEAR(p.total_mass(), 1.0, 1e-10);
                      ++calls;
                    });
  EXPECT_EQ(calls, 17u);
}

TEST(SequentialPosterior, InvariantUnderPermutation) {
  const auto table = likelihood_table(StateCoefficients::noon(4), {}, 512);
  std::vector<Outcome> record = {{0, 4}, {1, 3}, {4, 0}, {2, 2}, {0, 4}, {3, 1}};
  SequentialPosterior forward(table);
  for (const auto& o : record) forward.update(o);
  std::reverse(record.begin(), record.end());
  SequentialPosterior backward(table);
  for (const auto& o : record) backward.update(o);
  const auto a = forward.posterior();
  const auto b = backward.posterior();
  for (std::size_t k = 0; k < a.density.size(); ++k) EXPECT_NEAR(a.density[k], b.density[k], 1e-12);
}

TEST(SequentialPosterior, LongRecordsDoNotUnderflow) {
  const auto table = likelihood_table(StateCoefficients::fock(10), {}, 512);
  SequentialPosterior seq(table);
  for (int i = 0; i < 5000; ++i) seq.update({3, 7});
  EXPECT_NEAR(seq.posterior().total_mass(), 1.0, 1e-10);
}

}  // namespace
}  // namespace mzfid
