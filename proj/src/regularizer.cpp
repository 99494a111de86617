#include "opg/regularizer.hpp"

#include "opg/errors.hpp"

#include <cmath>
#include <string>

namespace opg {

void WeightRule::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("WeightRule: tau must be positive");
  if (!(eps_w > 0.0) || eps_w > 1.0) throw ConfigError("WeightRule: eps_w must lie in (0, 1]");
}

Vec update_weights(const Vec &prev_iterate, const WeightRule &rule) {
  rule.validate();
  Vec w(prev_iterate.size());
  for (std::size_t i = 0; i < prev_iterate.size(); ++i)
    w[i] = std::abs(prev_iterate[i]) > rule.tau ? rule.eps_w : 1.0;
  return w;
}

void WeightedL1::validate() const {
  if (rho < 0.0 || !std::isfinite(rho)) throw ConfigError("WeightedL1: rho must be nonnegative");
  if (weights.empty()) throw ConfigError("WeightedL1: weights must be nonempty");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (!(weights[i] > 0.0) || weights[i] > 1.0)
      throw ConfigError("WeightedL1: weight out of (0, 1] at coordinate " + std::to_string(i));
}

LossEvaluation reg_eval_subgrad(const WeightedL1 &r, const Vec &x) {
  if (x.size() != r.weights.size()) throw ConfigError("reg_eval_subgrad: dimension mismatch");
  LossEvaluation out;
  out.subgradient.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.value += r.rho * r.weights[i] * std::abs(x[i]);
    out.subgradient[i] = r.rho * r.weights[i] * sign(x[i]);
  }
  return out;
}

Vec prox(const WeightedL1 &r, double eta, const Vec &x, const BoxSet &box) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("prox: eta must be positive");
  if (x.size() != r.weights.size() || x.size() != box.dim())
    throw ConfigError("prox: dimension mismatch");
  Vec u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    u[i] = box.clamp_coord(soft_threshold(x[i], eta * r.rho * r.weights[i]), i);
  return u;
}

}  // namespace opg
