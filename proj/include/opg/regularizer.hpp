#pragma once

#include "opg/box.hpp"
#include "opg/losses.hpp"
#include "opg/vec.hpp"

namespace opg {

// scalar soft threshold: sign(v) * max(|v| - s, 0)
inline double soft_threshold(double v, double s) {
  if (v > s) return v - s;
  if (v < -s) return v + s;
  return 0.0;
}

// Drives the per-coordinate weights of the time-varying l1 penalty: coordinates the
// previous action pushed past tau get the small floor weight, the rest stay at 1.
struct WeightRule {
  double tau = 1.0;    // magnitude threshold, > 0
  double eps_w = 0.1;  // floor weight in (0, 1]

  void validate() const;
};

Vec update_weights(const Vec &prev_iterate, const WeightRule &rule);

// r(x) = rho * sum_i weights[i] * |x_i|, weights in (0, 1]. rho = 0 is the
// no-regularizer limit (prox degenerates to projection).
struct WeightedL1 {
  double rho = 0.0;
  Vec weights;

  void validate() const;
  static WeightedL1 uniform(double rho, std::size_t dim) { return WeightedL1{rho, Vec(dim, 1.0)}; }
};

LossEvaluation reg_eval_subgrad(const WeightedL1 &r, const Vec &x);

inline double reg_value(const WeightedL1 &r, const Vec &x) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += r.rho * r.weights[i] * std::abs(x[i]);
  return v;
}

// argmin_{u in box} r(u) + (1/(2*eta)) ||u - x||^2, solved exactly per coordinate
// by clamping the soft threshold (the objective is separable and convex).
Vec prox(const WeightedL1 &r, double eta, const Vec &x, const BoxSet &box);

}  // namespace opg
