#pragma once

#include "opg/box.hpp"
#include "opg/losses.hpp"
#include "opg/regularizer.hpp"
#include "opg/vec.hpp"

#include <functional>
#include <vector>

namespace opg {

// Brute-force grid search settings. Full grids are capped at 3 dimensions because the
// cost is (width/resolution)^dim; higher-dimensional checks must use separable or
// analytically solvable constructions instead.
struct GridSpec {
  double resolution = 1e-4;
  int max_dims = 3;

  void validate() const;
};

struct MinimizeResult {
  Vec argmin;
  double value = 0.0;
};

// One round's composite objective F(x) = f(x, example) + r(x), the unit the
// comparator oracles minimize.
struct CompositeLoss {
  LossSpec f;
  LabeledExample example;
  WeightedL1 r;

  double value(const Vec &x) const;
};

// Reference prox by independent per-coordinate 1-D grid search (the prox objective is
// separable, so per-coordinate search is exhaustive, not heuristic). Agreement with the
// closed-form prox is within resolution-level tolerance.
Vec brute_prox(const WeightedL1 &r, double eta, const Vec &x, const BoxSet &box,
               const GridSpec &grid);

// Full-grid minimizer of an arbitrary objective over the box; ties broken toward the
// lexicographically smallest grid point. Throws when box.dim() > grid.max_dims.
MinimizeResult brute_minimize(const std::function<double(const Vec &)> &objective,
                              const BoxSet &box, const GridSpec &grid);

MinimizeResult brute_minimize(const CompositeLoss &loss, const BoxSet &box, const GridSpec &grid);

// Per-round minimizers of a sequence of composite objectives: the default comparator
// sequence for dynamic-regret evaluation.
std::vector<Vec> comparator_from_minimizers(const std::vector<CompositeLoss> &rounds,
                                            const BoxSet &box, const GridSpec &grid);

}  // namespace opg
