#pragma once

// Derivative-free Nelder-Mead minimization in an unconstrained space.

#include <functional>
#include <vector>

namespace ots {

struct SimplexOptions {
  double initial_step = 0.5;
  int max_evals = 4000;
  // Converged when the simplex diameter (max-norm from the best vertex) is
  // below xtol and the objective spread is below ftol*(1+|f_best|).
  double xtol = 1e-8;
  double ftol = 1e-12;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int n_evals = 0;
  bool converged = false;
};

// Non-finite objective values are treated as +inf. Never returns a point
// worse than the start.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opt = {});

}  // namespace ots
