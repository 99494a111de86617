#include "opg/oracle.hpp"

#include "opg/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace opg {

namespace {

// Grid over [lo, hi]: lo + k*res while strictly below hi, then hi itself, so both
// endpoints are exact candidates and no point leaves the interval.
std::vector<double> axis_points(double lo, double hi, double res) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>((hi - lo) / res) + 2);
  for (std::int64_t k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * res;
    if (v >= hi) break;
    pts.push_back(v);
  }
  pts.push_back(hi);
  return pts;
}

}  // namespace

void GridSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw ConfigError("GridSpec: resolution must be positive");
  if (max_dims < 1 || max_dims > 3) throw ConfigError("GridSpec: max_dims must be 1, 2, or 3");
}

double CompositeLoss::value(const Vec &x) const { return f.value(x, example) + reg_value(r, x); }

Vec brute_prox(const WeightedL1 &r, double eta, const Vec &x, const BoxSet &box,
               const GridSpec &grid) {
  grid.validate();
  if (!(eta > 0.0)) throw ConfigError("brute_prox: eta must be positive");
  if (x.size() != box.dim() || r.weights.size() != box.dim())
    throw ConfigError("brute_prox: dimension mismatch");
  Vec u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto pts = axis_points(box.lower()[i], box.upper()[i], grid.resolution);
    double best_v = std::numeric_limits<double>::infinity();
    double best_p = pts.front();
    for (double p : pts) {
      const double d = p - x[i];
      const double v = r.rho * r.weights[i] * std::abs(p) + d * d / (2.0 * eta);
      if (v < best_v) {
        best_v = v;
        best_p = p;
      }
    }
    u[i] = best_p;
  }
  return u;
}

MinimizeResult brute_minimize(const std::function<double(const Vec &)> &objective,
                              const BoxSet &box, const GridSpec &grid) {
  grid.validate();
  const std::size_t n = box.dim();
  if (n > static_cast<std::size_t>(grid.max_dims))
    throw ConfigError("brute_minimize: box dimension " + std::to_string(n) +
                      " exceeds grid cap of " + std::to_string(grid.max_dims));
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i)
    axes[i] = axis_points(box.lower()[i], box.upper()[i], grid.resolution);

  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  Vec pt(n);
  std::vector<std::size_t> idx(n, 0);
  // Lexicographic sweep; strict improvement keeps the lexicographically smallest tie.
  bool done = false;
  while (!done) {
    for (std::size_t i = 0; i < n; ++i) pt[i] = axes[i][idx[i]];
    const double v = objective(pt);
    if (v < best.value) {
      best.value = v;
      best.argmin = pt;
    }
    std::size_t i = n;
    for (;;) {
      if (i == 0) {
        done = true;
        break;
      }
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return best;
}

MinimizeResult brute_minimize(const CompositeLoss &loss, const BoxSet &box, const GridSpec &grid) {
  return brute_minimize([&loss](const Vec &x) { return loss.value(x); }, box, grid);
}

std::vector<Vec> comparator_from_minimizers(const std::vector<CompositeLoss> &rounds,
                                            const BoxSet &box, const GridSpec &grid) {
  std::vector<Vec> out;
  out.reserve(rounds.size());
  for (const auto &round : rounds) out.push_back(brute_minimize(round, box, grid).argmin);
  return out;
}

}  // namespace opg
