#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mzfid {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  /// Stop once f(worst) - f(best) over the simplex drops below this.
  double f_tolerance = 1e-7;
  /// Additive offset of the initial simplex vertices along each axis.
  double initial_step = 0.25;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Minimizes f starting from a simplex around x0. Deterministic: no randomness and
/// ties broken by vertex index.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace mzfid
