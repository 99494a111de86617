#pragma once

#include "opg/box.hpp"
#include "opg/losses.hpp"
#include "opg/regularizer.hpp"
#include "opg/schedule.hpp"
#include "opg/vec.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace opg {

// ---- step primitives ----
// Each step consumes the revealed loss's evaluation at the state's current action and
// advances the state. All argmins are solved by the exact clamped soft-threshold prox,
// so every produced point is feasible by construction.

struct OpgState {
  Vec x;  // x_t, the played point
};

// x_{t+1} = prox_{eta_t r_t}(x_t - eta_t * subgrad f_t(x_t)), clamped to the box.
void opg_step(OpgState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
              const BoxSet &set, double eta_t);

struct SageState {
  Vec y;  // y_{t-1}
  Vec z;  // z_{t-1}
  Vec x;  // x_t = (1-alpha_t) y_{t-1} + alpha_t z_{t-1}, set by sage_propose
};

// Sets state.x for round t.
void sage_propose(SageState &state, double alpha_t);

// y_t  = argmin <g, x - x_t> + (L_t/2)||x - x_t||^2 + r_t(x)   (prox, step 1/L_t)
// z_t  = z_{t-1} - alpha_t (L_t + mu alpha_t)^{-1} [L_t (x_t - y_t) + mu (z_{t-1} - x_t)]
// both kept inside the box.
void sage_step(SageState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
               const BoxSet &set, double alpha_t, double l_t, double mu);

struct AcsaState {
  Vec x;     // x_{t-1}
  Vec x_ag;  // x_{t-1}^{ag}
  Vec x_md;  // x_t^{md}, the queried/played point, set by acsa_propose
};

// x_t^{md} = (1-a)(mu+g)/(g+(1-a^2)mu) * x_{t-1}^{ag} + a((1-a)mu+g)/(g+(1-a^2)mu) * x_{t-1}
void acsa_propose(AcsaState &state, double alpha_t, double gamma_t, double mu);

// x_t ties together the two proximity quadratics (coefficient q = alpha_t*mu +
// (1-alpha_t)*mu + gamma_t) and the linearized loss; it reduces to the weighted-l1
// prox with effective step alpha_t/q applied to the combined center.
// x_t^{ag} = alpha_t x_t + (1-alpha_t) x_{t-1}^{ag}
void acsa_step(AcsaState &state, const LossEvaluation &f_eval_at_x_md, const WeightedL1 &r,
               const BoxSet &set, double alpha_t, double gamma_t, double mu);

struct RdaState {
  Vec x;       // x_t, the played point
  Vec g_sum;   // sum of observed subgradients
  std::int64_t rounds = 0;
};

// x_{t+1} = argmin (1/t) sum_tau <g_tau, x> + r_t(x) + (beta_t/t) * (1/2)||x||^2,
// i.e. the weighted-l1 prox with step t/beta_t applied to -(t/beta_t) * mean gradient.
void rda_step(RdaState &state, const LossEvaluation &f_eval_at_x_t, const WeightedL1 &r,
              const BoxSet &set, double beta_t);

// ---- baseline parameter sequences ----

inline double sage_alpha(std::int64_t t) { return 2.0 / (static_cast<double>(t) + 1.0); }
double sage_l(std::int64_t t, double l0, bool strongly_convex);
inline double acsa_alpha(std::int64_t t) { return 2.0 / (static_cast<double>(t) + 1.0); }
double acsa_gamma(std::int64_t t, double g0, bool strongly_convex);
double rda_beta(std::int64_t t, double b0);

// ---- stateful wrappers for the bench loop ----

enum class Algo { OPG, SAGE, ACSA, RDA };
Algo algo_from_string(const std::string &name);
std::string to_string(Algo a);

class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  // Point played at round t; must be called with t = 1, 2, ... in order.
  virtual const Vec &propose(std::int64_t t) = 0;
  // Advance with the revealed loss evaluated at the proposed point.
  virtual void observe(const LossEvaluation &f_eval, const WeightedL1 &r, std::int64_t t) = 0;
  // Scalar recorded in the ledger's step column (OPG: eta_t; baselines: effective prox step).
  virtual double step_scalar(std::int64_t t) const = 0;
  virtual Algo algo() const = 0;
};

std::unique_ptr<OnlineLearner> make_opg(const Vec &x1, const BoxSet &set, StepSchedule schedule);
std::unique_ptr<OnlineLearner> make_sage(const Vec &x1, const BoxSet &set, double l0, double mu);
std::unique_ptr<OnlineLearner> make_acsa(const Vec &x1, const BoxSet &set, double g0, double mu);
std::unique_ptr<OnlineLearner> make_rda(const Vec &x1, const BoxSet &set, double b0);

}  // namespace opg
