#include "opg/learners.hpp"

#include "opg/errors.hpp"

#include <cmath>
#include <utility>

namespace opg {

namespace {

void check_alpha(double alpha_t) {
  if (!(alpha_t > 0.0) || alpha_t > 1.0)
    throw ConfigError("learner step: alpha_t must lie in (0, 1]");
}

}  // namespace

void opg_step(OpgState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
              const BoxSet &set, double eta_t) {
  if (!(eta_t > 0.0)) throw ConfigError("opg_step: eta_t must be positive");
  const Vec v = axpy(state.x, -eta_t, f_eval_at_x_t.subgradient);
  state.x = prox(r, eta_t, v, set);
}

void sage_propose(SageState &state, double alpha_t) {
  check_alpha(alpha_t);
  state.x = axpy(scale(state.y, 1.0 - alpha_t), alpha_t, state.z);
}

void sage_step(SageState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
               const BoxSet &set, double alpha_t, double l_t, double mu) {
  check_alpha(alpha_t);
  if (!(l_t > 0.0)) throw ConfigError("sage_step: L_t must be positive");
  if (mu < 0.0) throw ConfigError("sage_step: mu must be nonnegative");
  const Vec &g = f_eval_at_x_t.subgradient;
  const Vec y_new = prox(r, 1.0 / l_t, axpy(state.x, -1.0 / l_t, g), set);
  const double coef = alpha_t / (l_t + mu * alpha_t);
  Vec z_new(state.z.size());
  for (std::size_t i = 0; i < z_new.size(); ++i) {
    const double pull = l_t * (state.x[i] - y_new[i]) + mu * (state.z[i] - state.x[i]);
    z_new[i] = state.z[i] - coef * pull;
  }
  state.y = y_new;
  state.z = set.project(z_new);
}

void acsa_propose(AcsaState &state, double alpha_t, double gamma_t, double mu) {
  check_alpha(alpha_t);
  if (!(gamma_t > 0.0)) throw ConfigError("acsa_propose: gamma_t must be positive");
  if (mu < 0.0) throw ConfigError("acsa_propose: mu must be nonnegative");
  const double denom = gamma_t + (1.0 - alpha_t * alpha_t) * mu;
  const double c_ag = (1.0 - alpha_t) * (mu + gamma_t) / denom;
  const double c_x = alpha_t * ((1.0 - alpha_t) * mu + gamma_t) / denom;
  state.x_md = axpy(scale(state.x_ag, c_ag), c_x, state.x);
}

void acsa_step(AcsaState &state, const LossEvaluation &f_eval_at_x_md, const WeightedL1 &r,
               const BoxSet &set, double alpha_t, double gamma_t, double mu) {
  check_alpha(alpha_t);
  if (!(gamma_t > 0.0)) throw ConfigError("acsa_step: gamma_t must be positive");
  if (mu < 0.0) throw ConfigError("acsa_step: mu must be nonnegative");
  const double q = alpha_t * mu + (1.0 - alpha_t) * mu + gamma_t;
  const double w_md = alpha_t * mu;
  const double w_prev = (1.0 - alpha_t) * mu + gamma_t;
  const Vec &g = f_eval_at_x_md.subgradient;
  Vec center(state.x.size());
  for (std::size_t i = 0; i < center.size(); ++i)
    center[i] = (w_md * state.x_md[i] + w_prev * state.x[i] - alpha_t * g[i]) / q;
  const Vec x_new = prox(r, alpha_t / q, center, set);
  state.x_ag = axpy(scale(state.x_ag, 1.0 - alpha_t), alpha_t, x_new);
  state.x = x_new;
}

void rda_step(RdaState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
              const BoxSet &set, double beta_t) {
  if (!(beta_t > 0.0)) throw ConfigError("rda_step: beta_t must be positive");
  state.rounds += 1;
  if (state.g_sum.empty()) state.g_sum.assign(state.x.size(), 0.0);
  state.g_sum = add(state.g_sum, f_eval_at_x_t.subgradient);
  const double t = static_cast<double>(state.rounds);
  const double step = t / beta_t;
  // -(t/beta_t) * gbar_t = -(1/beta_t) * g_sum
  state.x = prox(r, step, scale(state.g_sum, -1.0 / beta_t), set);
}

double sage_l(std::int64_t t, double l0, bool strongly_convex) {
  if (!(l0 > 0.0)) throw ConfigError("sage_l: L0 must be positive");
  const double td = static_cast<double>(t);
  return strongly_convex ? l0 * td : l0 * std::sqrt(td);
}

double acsa_gamma(std::int64_t t, double g0, bool strongly_convex) {
  if (!(g0 > 0.0)) throw ConfigError("acsa_gamma: gamma0 must be positive");
  const double td = static_cast<double>(t);
  return strongly_convex ? g0 * td : g0 * std::sqrt(td);
}

double rda_beta(std::int64_t t, double b0) {
  if (!(b0 > 0.0)) throw ConfigError("rda_beta: beta0 must be positive");
  return b0 * std::sqrt(static_cast<double>(t));
}

Algo algo_from_string(const std::string &name) {
  if (name == "OPG") return Algo::OPG;
  if (name == "SAGE") return Algo::SAGE;
  if (name == "ACSA") return Algo::ACSA;
  if (name == "RDA") return Algo::RDA;
  throw ConfigError("unknown algorithm: " + name);
}

std::string to_string(Algo a) {
  switch (a) {
    case Algo::OPG: return "OPG";
    case Algo::SAGE: return "SAGE";
    case Algo::ACSA: return "ACSA";
    case Algo::RDA: return "RDA";
  }
  return "?";
}

namespace {

void check_start(const Vec &x1, const BoxSet &set) {
  if (x1.size() != set.dim()) throw ConfigError("learner: start point dimension mismatch");
  if (!set.contains(x1)) throw ConfigError("learner: start point is infeasible");
}

class OpgLearner final : public OnlineLearner {
 public:
  OpgLearner(const Vec &x1, const BoxSet &set, StepSchedule schedule)
      : set_(set), schedule_(std::move(schedule)) {
    check_start(x1, set);
    state_.x = x1;
  }
  const Vec &propose(std::int64_t) override { return state_.x; }
  void observe(const LossEvaluation &f_eval, const WeightedL1 &r, std::int64_t t) override {
    opg_step(state_, f_eval, r, set_, schedule_.eta(t));
  }
  double step_scalar(std::int64_t t) const override { return schedule_.eta(t); }
  Algo algo() const override { return Algo::OPG; }
  const Vec &iterate() const { return state_.x; }

 private:
  BoxSet set_;
  StepSchedule schedule_;
  OpgState state_;
};

class SageLearner final : public OnlineLearner {
 public:
  SageLearner(const Vec &x1, const BoxSet &set, double l0, double mu)
      : set_(set), l0_(l0), mu_(mu) {
    check_start(x1, set);
    state_.y = x1;
    state_.z = x1;
    state_.x = x1;
  }
  const Vec &propose(std::int64_t t) override {
    sage_propose(state_, sage_alpha(t));
    return state_.x;
  }
  void observe(const LossEvaluation &f_eval, const WeightedL1 &r, std::int64_t t) override {
    sage_step(state_, f_eval, r, set_, sage_alpha(t), sage_l(t, l0_, mu_ > 0.0), mu_);
  }
  double step_scalar(std::int64_t t) const override { return 1.0 / sage_l(t, l0_, mu_ > 0.0); }
  Algo algo() const override { return Algo::SAGE; }

 private:
  BoxSet set_;
  double l0_;
  double mu_;
  SageState state_;
};

class AcsaLearner final : public OnlineLearner {
 public:
  AcsaLearner(const Vec &x1, const BoxSet &set, double g0, double mu)
      : set_(set), g0_(g0), mu_(mu) {
    check_start(x1, set);
    state_.x = x1;
    state_.x_ag = x1;
    state_.x_md = x1;
  }
  const Vec &propose(std::int64_t t) override {
    acsa_propose(state_, acsa_alpha(t), acsa_gamma(t, g0_, mu_ > 0.0), mu_);
    return state_.x_md;
  }
  void observe(const LossEvaluation &f_eval, const WeightedL1 &r, std::int64_t t) override {
    acsa_step(state_, f_eval, r, set_, acsa_alpha(t), acsa_gamma(t, g0_, mu_ > 0.0), mu_);
  }
  double step_scalar(std::int64_t t) const override {
    const double alpha = acsa_alpha(t);
    const double q = mu_ + acsa_gamma(t, g0_, mu_ > 0.0);
    return alpha / q;
  }
  Algo algo() const override { return Algo::ACSA; }

 private:
  BoxSet set_;
  double g0_;
  double mu_;
  AcsaState state_;
};

class RdaLearner final : public OnlineLearner {
 public:
  RdaLearner(const Vec &x1, const BoxSet &set, double b0) : set_(set), b0_(b0) {
    check_start(x1, set);
    state_.x = x1;
  }
  const Vec &propose(std::int64_t) override { return state_.x; }
  void observe(const LossEvaluation &f_eval, const WeightedL1 &r, std::int64_t t) override {
    rda_step(state_, f_eval, r, set_, rda_beta(t, b0_));
  }
  double step_scalar(std::int64_t t) const override {
    return static_cast<double>(t) / rda_beta(t, b0_);
  }
  Algo algo() const override { return Algo::RDA; }

 private:
  BoxSet set_;
  double b0_;
  RdaState state_;
};

}  // namespace

std::unique_ptr<OnlineLearner> make_opg(const Vec &x1, const BoxSet &set, StepSchedule schedule) {
  return std::make_unique<OpgLearner>(x1, set, std::move(schedule));
}
std::unique_ptr<OnlineLearner> make_sage(const Vec &x1, const BoxSet &set, double l0, double mu) {
  return std::make_unique<SageLearner>(x1, set, l0, mu);
}
std::unique_ptr<OnlineLearner> make_acsa(const Vec &x1, const BoxSet &set, double g0, double mu) {
  return std::make_unique<AcsaLearner>(x1, set, g0, mu);
}
std::unique_ptr<OnlineLearner> make_rda(const Vec &x1, const BoxSet &set, double b0) {
  return std::make_unique<RdaLearner>(x1, set, b0);
}

}  // namespace opg
