#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace mzfid {

/// Uniform periodic grid over (-pi, pi]: phi_k = -pi + 2*pi*(k+1)/size for k = 0..size-1.
/// The last point is exactly pi. Every point carries the trapezoid weight 2*pi/size.
class PhaseGrid {
 public:
  explicit PhaseGrid(std::size_t size);

  std::size_t size() const { return size_; }
  double weight() const { return 2.0 * std::numbers::pi / static_cast<double>(size_); }
  double point(std::size_t k) const;
  std::vector<double> points() const;

  /// Index of the grid point nearest to phi on the circle.
  std::size_t nearest(double phi) const;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

 private:
  std::size_t size_;
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phi);

}  // namespace mzfid
