#pragma once

#include "opg/vec.hpp"

#include <string>

namespace opg {

// One streamed observation. The label is +-1 for classification sources (enforced
// by the stream generators and the ingesters); regression-style losses accept any
// finite label.
struct LabeledExample {
  double label = 0.0;
  Vec features;
};

// Value and one subgradient of a loss at a point. Subgradient choices at kinks are
// pinned per loss below (always the minimal-norm / flatter-branch member).
struct LossEvaluation {
  double value = 0.0;
  Vec subgradient;
};

// max(0, 1 - y<a,x>). At the kink y<a,x> = 1 the zero vector is returned.
LossEvaluation hinge(const Vec &x, const LabeledExample &ex);

// Piecewise-linear hinge with slope -alpha on nonpositive margins (alpha > 1):
//   margin <= 0: 1 - alpha*margin,  0 < margin < 1: 1 - margin,  margin >= 1: 0.
// At the breakpoints the flatter branch's gradient is returned.
LossEvaluation generalized_hinge(const Vec &x, const LabeledExample &ex, double alpha);

// |y - <a,x>| with the zero subgradient at the kink.
LossEvaluation absolute_loss(const Vec &x, const LabeledExample &ex);

// max(|y - <a,x>| - eps, 0); zero subgradient everywhere inside and on the tube boundary.
LossEvaluation eps_insensitive(const Vec &x, const LabeledExample &ex, double eps);

// Adds (lambda/2)||x||^2 to a base evaluation, making it lambda-strongly convex.
LossEvaluation ridge_augment(const LossEvaluation &base, const Vec &x, double lambda);

enum class LossKind { hinge, generalized_hinge, absolute, eps_insensitive };

LossKind loss_kind_from_string(const std::string &name);
std::string to_string(LossKind kind);

// True for losses whose label is a real target rather than a class sign.
bool is_regression(LossKind kind);

// A configured loss family: the nonsmooth part plus an optional ridge term.
// lambda > 0 makes every round's loss lambda-strongly convex.
struct LossSpec {
  LossKind kind = LossKind::hinge;
  double alpha = 2.0;   // generalized hinge slope, > 1
  double eps = 0.1;     // eps-insensitive tube half-width, > 0
  double lambda = 0.0;  // ridge coefficient, >= 0

  void validate() const;
  LossEvaluation eval(const Vec &x, const LabeledExample &ex) const;
  // Value without the subgradient; the allocation-free path grid oracles hammer.
  double value(const Vec &x, const LabeledExample &ex) const;
  // Strong convexity modulus contributed by this family (lambda; 0 when no ridge).
  double strong_convexity() const { return lambda; }
};

}  // namespace opg
