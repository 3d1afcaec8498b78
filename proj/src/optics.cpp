#include "mzfid/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "mzfid/errors.hpp"

namespace mzfid {

namespace {

constexpr double kNormTolerance = 1e-12;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binomial(int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

// Integer power by squaring; 0^0 == 1.
template <typename T>
T ipow(T base, int exponent) {
  T result{1.0};
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

double clamp_probability(double p) { return p < kProbabilityFloor ? 0.0 : p; }

// True when |value| is within rounding noise of a sum whose terms have size `scale`.
bool cancelled(const Complex& value, double scale) {
  return std::abs(value) <= kCancellationTolerance * scale;
}

void require_counts(Outcome outcome) {
  if (outcome.n_c < 0 || outcome.n_d < 0) {
    throw InvalidArgument("photon counts must be non-negative");
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw InvalidArgument(std::string(what) + " must be finite");
}

}  // namespace

std::vector<Outcome> outcomes_for(int photons) {
  if (photons < 0) throw InvalidArgument("photon number must be non-negative");
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(photons) + 1);
  for (int n_c = 0; n_c <= photons; ++n_c) out.push_back({n_c, photons - n_c});
  return out;
}

// ---------------------------------------------------------------------------
// Scattering matrix

Complex ScatteringMatrix::determinant() const {
  return entries_[0][0] * entries_[1][1] - entries_[0][1] * entries_[1][0];
}

double ScatteringMatrix::unitarity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex sum = std::conj(entries_[0][i]) * entries_[0][j] + std::conj(entries_[1][i]) * entries_[1][j];
      if (i == j) sum -= 1.0;
      worst = std::max(worst, std::abs(sum));
    }
  }
  return worst;
}

ScatteringMatrix build_scattering_matrix(double phi, const InterferometerGeometry& geometry) {
  require_finite(phi, "phase");
  require_finite(geometry.kl1, "kL1");
  require_finite(geometry.kl2, "kL2");

  const Complex upper = std::polar(1.0, phi + geometry.kl1);
  const Complex lower = std::polar(1.0, geometry.kl2);
  const Complex z_part = 0.5 * (upper - lower);                  // coefficient of sigma_z
  const Complex x_part = Complex(0.0, -0.5) * (upper + lower);  // coefficient of sigma_x
  return ScatteringMatrix({{{z_part, x_part}, {x_part, -z_part}}}, phi);
}

// ---------------------------------------------------------------------------
// States

StateCoefficients::StateCoefficients(std::vector<Complex> coeffs, std::string label)
    : coeffs_(std::move(coeffs)), label_(std::move(label)) {
  if (coeffs_.empty()) throw InvalidArgument("state needs at least one coefficient");
  double norm = 0.0;
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("state coefficients must be finite");
    }
    norm += std::norm(c);
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvalidArgument("state coefficients are not normalized (sum |c_n|^2 = " +
                          std::to_string(norm) + ")");
  }
}

StateCoefficients StateCoefficients::fock(int photons) {
  if (photons < 0) throw InvalidArgument("photon number must be non-negative");
  std::vector<Complex> c(static_cast<std::size_t>(photons) + 1);
  c.back() = 1.0;
  return StateCoefficients(std::move(c), "fock");
}

StateCoefficients StateCoefficients::noon(int photons) {
  if (photons < 1) throw InvalidArgument("N00N state needs at least one photon");
  std::vector<Complex> c(static_cast<std::size_t>(photons) + 1);
  c.front() = std::numbers::sqrt2 / 2.0;
  c.back() = std::numbers::sqrt2 / 2.0;
  return StateCoefficients(std::move(c), "noon");
}

// ---------------------------------------------------------------------------
// Closed forms (equal arms)

double fock_outcome_prob(int photons, Outcome outcome, double phi) {
  if (photons < 0) throw InvalidArgument("photon number must be non-negative");
  require_counts(outcome);
  require_finite(phi, "phase");
  if (outcome.total() != photons) return 0.0;

  const double s2 = ipow(std::sin(0.5 * phi), 2);
  const double c2 = ipow(std::cos(0.5 * phi), 2);
  const double weight = std::exp(log_binomial(photons, outcome.n_c));
  return clamp_probability(weight * ipow(s2, outcome.n_c) * ipow(c2, outcome.n_d));
}

double noon_outcome_prob(int photons, Outcome outcome, double phi) {
  if (photons < 1) throw InvalidArgument("N00N state needs at least one photon");
  require_counts(outcome);
  require_finite(phi, "phase");
  if (outcome.total() != photons) return 0.0;

  const double s = std::sin(0.5 * phi);
  const double c = std::cos(0.5 * phi);
  const double sign = (outcome.n_c % 2 == 0) ? 1.0 : -1.0;
  const double bracket = ipow(s, outcome.n_c) * ipow(c, outcome.n_d) +
                         sign * ipow(s, outcome.n_d) * ipow(c, outcome.n_c);
  const double weight = 0.5 * std::exp(log_binomial(photons, outcome.n_c));
  return clamp_probability(weight * bracket * bracket);
}

// ---------------------------------------------------------------------------
// General states

std::vector<Complex> output_amplitudes(const ScatteringMatrix& s, int n_a, int n_b) {
  if (n_a < 0 || n_b < 0) throw InvalidArgument("photon counts must be non-negative");
  const auto photons = static_cast<std::size_t>(n_a + n_b);
  std::vector<Complex> state(photons + 1, Complex{});
  std::vector<Complex> next(photons + 1, Complex{});
  state[0] = 1.0;  // vacuum

  // Each step applies one transformed creation operator and divides by sqrt(m), so every
  // intermediate vector is U|m, 0> or U|n_a, m>: unit norm, no large cancelling terms.
  std::size_t k = 0;  // photons placed so far
  const auto add_photon = [&](const Complex& to_c, const Complex& to_d, int m) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(k + 2), Complex{});
    for (std::size_t j = 0; j <= k; ++j) {
      const Complex v = state[j] * scale;
      next[j + 1] += to_c * (std::sqrt(static_cast<double>(j + 1)) * v);
      next[j] += to_d * (std::sqrt(static_cast<double>(k - j + 1)) * v);
    }
    ++k;
    std::swap(state, next);
  };
  for (int m = 1; m <= n_a; ++m) add_photon(s(0, 0), s(1, 0), m);
  for (int m = 1; m <= n_b; ++m) add_photon(s(0, 1), s(1, 1), m);
  return state;
}

Complex transition_amplitude(const ScatteringMatrix& s, int n_a, int n_b, int n_c, int n_d) {
  if (n_a < 0 || n_b < 0 || n_c < 0 || n_d < 0) {
    throw InvalidArgument("photon counts must be non-negative");
  }
  if (n_a + n_b != n_c + n_d) {
    throw DomainError("photon number mismatch: " + std::to_string(n_a + n_b) + " in, " +
                      std::to_string(n_c + n_d) + " out");
  }
  return output_amplitudes(s, n_a, n_b)[static_cast<std::size_t>(n_c)];
}

std::vector<double> state_output_probs(const StateCoefficients& state, double phi,
                                       const InterferometerGeometry& geometry) {
  const int photons = state.photons();
  const ScatteringMatrix s = build_scattering_matrix(phi, geometry);
  std::vector<Complex> amplitude(static_cast<std::size_t>(photons) + 1, Complex{});
  for (int n = 0; n <= photons; ++n) {
    const Complex& c = state[static_cast<std::size_t>(n)];
    if (c == Complex{}) continue;
    const auto column = output_amplitudes(s, n, photons - n);
    for (std::size_t m = 0; m < amplitude.size(); ++m) amplitude[m] += c * column[m];
  }
  std::vector<double> probs(amplitude.size());
  for (std::size_t m = 0; m < amplitude.size(); ++m) probs[m] = clamp_probability(std::norm(amplitude[m]));
  return probs;
}

double state_outcome_prob(const StateCoefficients& state, double phi,
                          const InterferometerGeometry& geometry, Outcome outcome) {
  require_counts(outcome);
  const int photons = state.photons();
  if (outcome.total() != photons) {
    throw DomainError("outcome (" + std::to_string(outcome.n_c) + "," + std::to_string(outcome.n_d) +
                      ") does not match photon number " + std::to_string(photons));
  }
  return state_output_probs(state, phi, geometry)[static_cast<std::size_t>(outcome.n_c)];
}

// ---------------------------------------------------------------------------
// Trigonometric-polynomial representation

PhaseResponse::PhaseResponse(int photons, std::vector<Complex> coefficients)
    : photons_(photons), coefficients_(std::move(coefficients)) {
  if (photons < 0) throw InvalidArgument("photon number must be non-negative");
  if (coefficients_.size() != stride() * stride()) {
    throw InvalidArgument("phase response needs (N+1)^2 coefficients");
  }
}

Complex PhaseResponse::amplitude(int n_c, double phi) const {
  const Complex z = std::polar(1.0, phi);
  Complex acc = 0.0;
  for (int j = photons_; j >= 0; --j) acc = acc * z + coefficient(n_c, j);
  return acc;
}

double PhaseResponse::probability(int n_c, double phi) const {
  return clamp_probability(std::norm(amplitude(n_c, phi)));
}

TransferExpansion::TransferExpansion(int photons, const InterferometerGeometry& geometry)
    : photons_(photons), geometry_(geometry) {
  if (photons < 0) throw InvalidArgument("photon number must be non-negative");
  const auto dim = static_cast<std::size_t>(photons) + 1;
  basis_.assign(dim * dim * dim, Complex{});

  // Sample every basis amplitude at phi_s = 2 pi s / (N+1), then invert the DFT.
  std::vector<Complex> samples(dim * dim * dim);  // [s][n][n_c]
  for (std::size_t s = 0; s < dim; ++s) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(dim);
    const ScatteringMatrix matrix = build_scattering_matrix(phi, geometry);
    for (int n = 0; n <= photons; ++n) {
      const auto column = output_amplitudes(matrix, n, photons - n);
      std::copy(column.begin(), column.end(), samples.begin() + static_cast<std::ptrdiff_t>((s * dim + static_cast<std::size_t>(n)) * dim));
    }
  }

  std::vector<Complex> roots(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    roots[r] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dim));
  }
  const double scale = 1.0 / static_cast<double>(dim);
  magnitude_.assign(dim * dim, 0.0);
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m < dim; ++m) {
      double mean_abs = 0.0;
      for (std::size_t s = 0; s < dim; ++s) mean_abs += std::abs(samples[(s * dim + n) * dim + m]);
      mean_abs *= scale;
      magnitude_[n * dim + m] = mean_abs;
      for (std::size_t j = 0; j < dim; ++j) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < dim; ++s) acc += samples[(s * dim + n) * dim + m] * roots[(j * s) % dim];
        acc *= scale;
        basis_[(n * dim + m) * dim + j] = cancelled(acc, mean_abs) ? Complex{} : acc;
      }
    }
  }
}

PhaseResponse TransferExpansion::expand(std::span<const Complex> coeffs) const {
  const auto dim = static_cast<std::size_t>(photons_) + 1;
  if (coeffs.size() != dim) {
    throw DomainError("state has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                      std::to_string(dim));
  }
  std::vector<Complex> out(dim * dim);
  std::vector<double> error_scale(dim, 0.0);  // per outcome
  for (std::size_t n = 0; n < dim; ++n) {
    const Complex c = coeffs[n];
    if (c == Complex{}) continue;
    const Complex* block = basis_.data() + n * dim * dim;
    for (std::size_t i = 0; i < dim * dim; ++i) out[i] += c * block[i];
    for (std::size_t m = 0; m < dim; ++m) error_scale[m] += std::abs(c) * magnitude_[n * dim + m];
  }
  // Interference that cancels down to rounding noise is an exact zero (e.g. the
  // balanced outcome of some N00N states), so impossible outcomes stay impossible.
  for (std::size_t m = 0; m < dim; ++m) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (cancelled(out[m * dim + j], error_scale[m])) out[m * dim + j] = Complex{};
    }
  }
  return PhaseResponse(photons_, std::move(out));
}

// ---------------------------------------------------------------------------
// Tabulation

LikelihoodTable::LikelihoodTable(PhaseGrid grid, std::vector<Outcome> outcomes, std::vector<double> values,
                                 std::string label, int photons)
    : grid_(grid),
      outcomes_(std::move(outcomes)),
      values_(std::move(values)),
      label_(std::move(label)),
      photons_(photons) {
  if (outcomes_.empty()) throw InvalidArgument("likelihood table needs at least one outcome");
  if (values_.size() != outcomes_.size() * grid_.size()) {
    throw InvalidArgument("likelihood table size does not match outcomes x grid");
  }
}

double LikelihoodTable::normalization_defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < columns(); ++k) {
    double sum = 0.0;
    for (std::size_t r = 0; r < rows(); ++r) sum += (*this)(r, k);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

LikelihoodTable likelihood_table(const PhaseResponse& response, std::size_t grid_size, std::string label) {
  const PhaseGrid grid(grid_size);
  const int photons = response.photons();
  const auto rows = static_cast<std::size_t>(photons) + 1;
  std::vector<double> values(rows * grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const Complex z = std::polar(1.0, grid.point(k));
    for (std::size_t m = 0; m < rows; ++m) {
      const auto n_c = static_cast<int>(m);
      Complex acc = 0.0;
      for (int j = photons; j >= 0; --j) acc = acc * z + response.coefficient(n_c, j);
      values[m * grid_size + k] = clamp_probability(std::norm(acc));
    }
  }
  return LikelihoodTable(grid, outcomes_for(photons), std::move(values), std::move(label), photons);
}

LikelihoodTable likelihood_table(const StateCoefficients& state, const InterferometerGeometry& geometry,
                                 std::size_t grid_size) {
  if (grid_size < 2) throw InvalidArgument("grid_size must be at least 2");
  const TransferExpansion expansion(state.photons(), geometry);
  return likelihood_table(expansion.expand(state), grid_size, state.label());
}

}  // namespace mzfid
