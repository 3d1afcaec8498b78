#include "mzfid/nelder_mead.hpp"

#include <algorithm>
#include <numeric>

#include "mzfid/errors.hpp"

namespace mzfid {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw InvalidArgument("nelder_mead needs at least one parameter");

  NelderMeadResult result;
  const auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(x);
  };

  std::vector<std::vector<double>> simplex(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  const auto along = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
    // centroid + t * (centroid - worst)
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
  };

  for (; result.iterations < options.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (values[worst] - values[best] < options.f_tolerance) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    along(options.reflection, simplex[worst], trial);
    const double reflected = eval(trial);

    if (reflected < values[best]) {
      std::vector<double> expanded(dim);
      along(options.expansion, simplex[worst], expanded);
      const double expanded_value = eval(expanded);
      if (expanded_value < reflected) {
        simplex[worst] = std::move(expanded);
        values[worst] = expanded_value;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }

    // Contract toward the better of the reflected point and the worst vertex.
    const bool outside = reflected < values[worst];
    std::vector<double> contracted(dim);
    along(outside ? options.contraction : -options.contraction, simplex[worst], contracted);
    const double contracted_value = eval(contracted);
    if (contracted_value < (outside ? reflected : values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = contracted_value;
      continue;
    }

    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[i][j] = simplex[best][j] + options.shrink * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace mzfid
