#include "opg/losses.hpp"

#include "opg/errors.hpp"

namespace opg {

LossEvaluation hinge(const Vec &x, const LabeledExample &ex) {
  const double margin = ex.label * dot(ex.features, x);
  LossEvaluation out;
  if (margin < 1.0) {
    out.value = 1.0 - margin;
    out.subgradient = scale(ex.features, -ex.label);
  } else {
    out.value = 0.0;
    out.subgradient.assign(x.size(), 0.0);
  }
  return out;
}

LossEvaluation generalized_hinge(const Vec &x, const LabeledExample &ex, double alpha) {
  if (!(alpha > 1.0)) throw ConfigError("generalized_hinge: alpha must exceed 1");
  const double margin = ex.label * dot(ex.features, x);
  LossEvaluation out;
  if (margin < 0.0) {
    out.value = 1.0 - alpha * margin;
    out.subgradient = scale(ex.features, -alpha * ex.label);
  } else if (margin < 1.0) {
    // Covers margin == 0; the slope -1 branch is the flatter of the two meeting there.
    out.value = 1.0 - margin;
    out.subgradient = scale(ex.features, -ex.label);
  } else {
    out.value = 0.0;
    out.subgradient.assign(x.size(), 0.0);
  }
  return out;
}

LossEvaluation absolute_loss(const Vec &x, const LabeledExample &ex) {
  const double resid = ex.label - dot(ex.features, x);
  LossEvaluation out;
  out.value = std::abs(resid);
  out.subgradient = scale(ex.features, -sign(resid));
  return out;
}

LossEvaluation eps_insensitive(const Vec &x, const LabeledExample &ex, double eps) {
  if (!(eps > 0.0)) throw ConfigError("eps_insensitive: eps must be positive");
  const double resid = ex.label - dot(ex.features, x);
  LossEvaluation out;
  if (std::abs(resid) > eps) {
    out.value = std::abs(resid) - eps;
    out.subgradient = scale(ex.features, -sign(resid));
  } else {
    out.value = 0.0;
    out.subgradient.assign(x.size(), 0.0);
  }
  return out;
}

LossEvaluation ridge_augment(const LossEvaluation &base, const Vec &x, double lambda) {
  if (lambda < 0.0) throw ConfigError("ridge_augment: lambda must be nonnegative");
  LossEvaluation out;
  out.value = base.value + 0.5 * lambda * norm_sq(x);
  out.subgradient = axpy(base.subgradient, lambda, x);
  return out;
}

LossKind loss_kind_from_string(const std::string &name) {
  if (name == "hinge") return LossKind::hinge;
  if (name == "generalized_hinge") return LossKind::generalized_hinge;
  if (name == "absolute") return LossKind::absolute;
  if (name == "eps_insensitive") return LossKind::eps_insensitive;
  throw ConfigError("unknown loss kind: " + name);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::hinge: return "hinge";
    case LossKind::generalized_hinge: return "generalized_hinge";
    case LossKind::absolute: return "absolute";
    case LossKind::eps_insensitive: return "eps_insensitive";
  }
  return "?";
}

bool is_regression(LossKind kind) {
  return kind == LossKind::absolute || kind == LossKind::eps_insensitive;
}

void LossSpec::validate() const {
  if (kind == LossKind::generalized_hinge && !(alpha > 1.0))
    throw ConfigError("LossSpec: generalized hinge needs alpha > 1");
  if (kind == LossKind::eps_insensitive && !(eps > 0.0))
    throw ConfigError("LossSpec: eps must be positive");
  if (lambda < 0.0) throw ConfigError("LossSpec: lambda must be nonnegative");
}

LossEvaluation LossSpec::eval(const Vec &x, const LabeledExample &ex) const {
  LossEvaluation base;
  switch (kind) {
    case LossKind::hinge: base = hinge(x, ex); break;
    case LossKind::generalized_hinge: base = generalized_hinge(x, ex, alpha); break;
    case LossKind::absolute: base = absolute_loss(x, ex); break;
    case LossKind::eps_insensitive: base = eps_insensitive(x, ex, eps); break;
  }
  if (lambda > 0.0) return ridge_augment(base, x, lambda);
  return base;
}

double LossSpec::value(const Vec &x, const LabeledExample &ex) const {
  const double m = dot(ex.features, x);
  double v = 0.0;
  switch (kind) {
    case LossKind::hinge: {
      const double margin = ex.label * m;
      v = margin < 1.0 ? 1.0 - margin : 0.0;
      break;
    }
    case LossKind::generalized_hinge: {
      const double margin = ex.label * m;
      if (margin < 0.0)
        v = 1.0 - alpha * margin;
      else if (margin < 1.0)
        v = 1.0 - margin;
      break;
    }
    case LossKind::absolute: v = std::abs(ex.label - m); break;
    case LossKind::eps_insensitive: {
      const double gap = std::abs(ex.label - m) - eps;
      v = gap > 0.0 ? gap : 0.0;
      break;
    }
  }
  if (lambda > 0.0) v += 0.5 * lambda * norm_sq(x);
  return v;
}

}  // namespace opg
