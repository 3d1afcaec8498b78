#include "mzfid/phase_grid.hpp"

#include <cmath>
#include <string>

#include "mzfid/errors.hpp"

namespace mzfid {

PhaseGrid::PhaseGrid(std::size_t size) : size_(size) {
  if (size < 2) {
    throw InvalidArgument("phase grid needs at least 2 points, got " + std::to_string(size));
  }
}

double PhaseGrid::point(std::size_t k) const {
  // Integer numerator keeps the grid exactly symmetric and puts the last point on pi.
  const auto numerator = 2.0 * static_cast<double>(k + 1) - static_cast<double>(size_);
  return numerator / static_cast<double>(size_) * std::numbers::pi;
}

std::vector<double> PhaseGrid::points() const {
  std::vector<double> out(size_);
  for (std::size_t k = 0; k < size_; ++k) out[k] = point(k);
  return out;
}

std::size_t PhaseGrid::nearest(double phi) const {
  const double offset = (wrap_phase(phi) + std::numbers::pi) / weight();
  const auto steps = static_cast<long long>(std::llround(offset));
  const auto n = static_cast<long long>(size_);
  return static_cast<std::size_t>(((steps - 1) % n + n) % n);
}

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(phi, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

}  // namespace mzfid
