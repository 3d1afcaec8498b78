#include "mzfid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "mzfid/errors.hpp"

namespace mzfid {

namespace {

// Streams likelihood rows into the mutual-information sum. Each row contributes
// (1/G) sum_k P_k log2(P_k / mean(P)); column sums are kept for the normalization check.
class InformationAccumulator {
 public:
  explicit InformationAccumulator(std::size_t columns) : column_sums_(columns, 0.0) {}

  void add_row(std::span<const double> row) {
    double sum = 0.0;
    double entropy_part = 0.0;  // sum_k P_k log2 P_k
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double p = row[k];
      column_sums_[k] += p;
      if (p > 0.0) {
        sum += p;
        entropy_part += p * std::log2(p);
      }
    }
    ++rows_;
    if (sum == 0.0) return;
    const double mean = sum / static_cast<double>(row.size());
    total_ += entropy_part - sum * std::log2(mean);
  }

  double normalization_defect() const {
    double worst = 0.0;
    for (double s : column_sums_) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
  }

  std::size_t rows() const { return rows_; }

  double bits() const { return std::max(0.0, total_ / static_cast<double>(column_sums_.size())); }

 private:
  std::vector<double> column_sums_;
  double total_ = 0.0;
  std::size_t rows_ = 0;
};

void require_normalized(double defect) {
  if (!(defect <= kTableNormTolerance)) {
    throw DomainError("likelihood table is not normalized (max column defect " + std::to_string(defect) + ")");
  }
}

StateCoefficients family_state(const std::string& family, int photons) {
  if (family == "fock") return StateCoefficients::fock(photons);
  if (family == "noon") return StateCoefficients::noon(photons);
  throw InvalidArgument("unknown state family '" + family + "' (expected fock or noon)");
}

// Advances a composition of `total` into parts.size() non-negative parts in
// lexicographic order; returns false after the last one.
bool next_composition(std::vector<int>& parts) {
  const std::size_t n = parts.size();
  if (n < 2) return false;
  // Find the rightmost non-last position with something to its right to borrow from.
  std::size_t i = n - 1;
  while (i > 0 && parts[i] == 0) --i;
  if (i == 0) return false;
  const int tail = parts[i];
  parts[i] = 0;
  ++parts[i - 1];
  parts[n - 1] = tail - 1;
  return true;
}

}  // namespace

FidelityReport mutual_information(const LikelihoodTable& table) {
  InformationAccumulator acc(table.columns());
  for (std::size_t r = 0; r < table.rows(); ++r) acc.add_row(table.row(r));
  require_normalized(acc.normalization_defect());
  return {acc.bits(), table.label(), table.photons(), table.columns(), table.rows()};
}

FidelityReport family_fidelity(const std::string& family, int photons, std::size_t grid_size) {
  return mutual_information(likelihood_table(family_state(family, photons), {}, grid_size));
}

std::vector<FidelityReport> fidelity_sweep(const std::string& family, int n_max, std::size_t grid_size) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  std::vector<FidelityReport> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(family_fidelity(family, n, grid_size));
  return out;
}

std::vector<FidelityReport> fidelity_sweep(const std::vector<StateCoefficients>& states, std::size_t grid_size,
                                           const InterferometerGeometry& geometry) {
  std::vector<FidelityReport> out;
  out.reserve(states.size());
  for (const auto& state : states) out.push_back(mutual_information(likelihood_table(state, geometry, grid_size)));
  return out;
}

std::size_t count_vector_total(std::size_t outcomes, int repeats) {
  // C(repeats + outcomes - 1, outcomes - 1), built incrementally so it stays exact.
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  if (outcomes == 0) return 0;
  std::size_t value = 1;
  const auto n = static_cast<std::size_t>(repeats);
  for (std::size_t i = 1; i < outcomes; ++i) {
    // value = C(n + i, i) = C(n + i - 1, i - 1) * (n + i) / i
    const std::size_t factor = n + i;
    if (value > kMax / factor) return kMax;
    value = value * factor / i;
  }
  return value;
}

FidelityReport repeated_mutual_information(const LikelihoodTable& single_shot, int repeats, std::size_t cap) {
  if (repeats < 1) throw InvalidArgument("repeats must be at least 1");
  require_normalized(single_shot.normalization_defect());

  const std::size_t rows = single_shot.rows();
  const std::size_t columns = single_shot.columns();
  const std::size_t vectors = count_vector_total(rows, repeats);
  if (vectors > cap) {
    throw ResourceLimit(std::to_string(rows) + " outcomes repeated " + std::to_string(repeats) +
                        " times exceed the cap of " + std::to_string(cap) + " count vectors");
  }

  std::vector<double> log_p(rows * columns);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns; ++k) {
      const double p = single_shot(r, k);
      log_p[r * columns + k] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
  }

  const double log_repeats_factorial = std::lgamma(static_cast<double>(repeats) + 1.0);
  InformationAccumulator acc(columns);
  std::vector<double> compound(columns);
  std::vector<int> counts(rows, 0);
  counts.back() = repeats;
  do {
    double log_coef = log_repeats_factorial;
    for (int m : counts) log_coef -= std::lgamma(static_cast<double>(m) + 1.0);
    std::fill(compound.begin(), compound.end(), log_coef);
    for (std::size_t r = 0; r < rows; ++r) {
      if (counts[r] == 0) continue;
      const double weight = counts[r];
      const double* lp = log_p.data() + r * columns;
      for (std::size_t k = 0; k < columns; ++k) compound[k] += weight * lp[k];
    }
    for (double& v : compound) {
      v = std::exp(v);
      if (v < kProbabilityFloor) v = 0.0;
    }
    acc.add_row(compound);
  } while (next_composition(counts));

  require_normalized(acc.normalization_defect());
  std::string label = single_shot.label();
  if (repeats > 1) label += "*" + std::to_string(repeats);
  return {acc.bits(), label, single_shot.photons() * repeats, columns, acc.rows()};
}

Observable parse_observable(const std::string& name) {
  if (name == "n_c") return Observable::kNc;
  if (name == "n_d") return Observable::kNd;
  if (name == "n_c-n_d" || name == "n_c - n_d" || name == "diff") return Observable::kDifference;
  throw InvalidArgument("unknown observable '" + name + "' (expected n_c, n_d or n_c-n_d)");
}

std::string observable_name(Observable observable) {
  switch (observable) {
    case Observable::kNc:
      return "n_c";
    case Observable::kNd:
      return "n_d";
    case Observable::kDifference:
      return "n_c-n_d";
  }
  return "?";
}

SensitivityEstimate error_propagation_sensitivity(const StateCoefficients& state,
                                                  const InterferometerGeometry& geometry, Observable observable,
                                                  double working_point) {
  if (!std::isfinite(working_point)) throw InvalidArgument("working point must be finite");
  const auto outcomes = outcomes_for(state.photons());
  const auto value = [observable](Outcome o) -> double {
    switch (observable) {
      case Observable::kNc:
        return o.n_c;
      case Observable::kNd:
        return o.n_d;
      case Observable::kDifference:
        return o.n_c - o.n_d;
    }
    return 0.0;
  };
  struct Moments {
    double mean = 0.0;
    double second = 0.0;
  };
  const auto moments = [&](double phi) {
    Moments out;
    const auto probs = state_output_probs(state, phi, geometry);
    for (const Outcome& o : outcomes) {
      const double p = probs[static_cast<std::size_t>(o.n_c)];
      const double v = value(o);
      out.mean += v * p;
      out.second += v * v * p;
    }
    return out;
  };

  const Moments at = moments(working_point);
  const double slope =
      (moments(working_point + kSlopeStep).mean - moments(working_point - kSlopeStep).mean) / (2.0 * kSlopeStep);
  if (std::abs(slope) < kStationarySlope) {
    throw DomainError("stationary point: d<m>/dphi vanishes at phi = " + std::to_string(working_point));
  }
  const double delta_m = std::sqrt(std::max(0.0, at.second - at.mean * at.mean));
  return {delta_m / std::abs(slope), delta_m, slope, at.mean, working_point};
}

}  // namespace mzfid
