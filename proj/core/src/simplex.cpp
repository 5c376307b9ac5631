#include "ots/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ots {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opt) {
  const std::size_t n = x0.size();
  SimplexResult res;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(x0);
  for (std::size_t j = 0; j < n; ++j) {
    pts[j + 1][j] += opt.initial_step;
    vals[j + 1] = eval(pts[j + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  bool converged = false;

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable on ties so the result does not depend on sort internals.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      p2[k] = std::move(pts[order[k]]);
      v2[k] = vals[order[k]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  while (true) {
    sort_vertices();
    if (n == 0) break;

    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter, std::abs(pts[k][j] - pts[0][j]));
    const double spread = vals[n] - vals[0];
    if (std::isfinite(vals[0]) && diameter < opt.xtol &&
        spread <= opt.ftol * (1.0 + std::abs(vals[0]))) {
      converged = true;
      break;
    }
    if (evals >= opt.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[k][j];
    for (double& c : centroid) c /= static_cast<double>(n);

    const std::vector<double>& worst = pts[n];
    for (std::size_t j = 0; j < n; ++j)
      xr[j] = centroid[j] + kReflect * (centroid[j] - worst[j]);
    const double fr = eval(xr);

    if (fr < vals[0]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + kExpand * (xr[j] - centroid[j]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
      continue;
    }
    // Contraction, outside if the reflection beat the worst vertex.
    const bool outside = fr < vals[n];
    const std::vector<double>& base = outside ? xr : worst;
    for (std::size_t j = 0; j < n; ++j)
      xc[j] = centroid[j] + kContract * (base[j] - centroid[j]);
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[n])) {
      pts[n] = xc;
      vals[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t j = 0; j < n; ++j)
        pts[k][j] = pts[0][j] + kShrink * (pts[k][j] - pts[0][j]);
      vals[k] = eval(pts[k]);
    }
  }

  res.x = pts[0];
  res.f = vals[0];
  res.n_evals = evals;
  res.converged = converged;
  return res;
}

}  // namespace ots
