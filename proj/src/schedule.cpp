#include "opg/schedule.hpp"

#include "opg/errors.hpp"

#include <cmath>

namespace opg {

namespace {

void check_horizon(std::int64_t horizon) {
  if (horizon < 1) throw ConfigError("StepSchedule: horizon must be at least 1");
}

void check_theorem1_exponents(double gamma, double beta) {
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("StepSchedule: beta must lie in [0, 1)");
  if (gamma < beta || gamma >= 1.0)
    throw ConfigError("StepSchedule: theorem1 needs gamma in [beta, 1)");
}

void check_theorem2_pair(double gamma, double delta, double mu) {
  if (!(delta > 0.0) || !(delta < mu))
    throw ConfigError("StepSchedule: theorem2 needs 0 < delta < mu");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ConfigError("StepSchedule: theorem2 gamma must be positive and finite");
  if (gamma * delta >= 1.0)
    throw ConfigError(
        "StepSchedule: theorem2 needs gamma*delta < 1; shrink delta, supply a positive "
        "||u1-x1||^2, or pass gamma explicitly");
}

}  // namespace

StepSchedule StepSchedule::theorem1(double gamma, double beta, double big_r, double big_m,
                                    std::int64_t horizon, double d_beta) {
  check_horizon(horizon);
  check_theorem1_exponents(gamma, beta);
  if (!(big_r > 0.0)) throw ConfigError("StepSchedule: diameter R must be positive");
  if (!(big_m > 0.0)) throw ConfigError("StepSchedule: subgradient bound M must be positive");
  if (d_beta < 0.0) throw ConfigError("StepSchedule: path variation must be nonnegative");
  const double big_t = static_cast<double>(horizon);
  const double sigma =
      std::sqrt((1.0 - gamma) * 2.0 * big_r * std::pow(big_t, 2.0 * gamma - beta - 1.0) * d_beta +
                big_r * big_r * std::pow(big_t, 2.0 * gamma - 1.0)) /
      big_m;
  return theorem1_with_sigma(gamma, sigma, horizon);
}

StepSchedule StepSchedule::theorem1_with_sigma(double gamma, double sigma, std::int64_t horizon) {
  check_horizon(horizon);
  if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("StepSchedule: theorem1 needs gamma in [0, 1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("StepSchedule: sigma must be positive and finite");
  StepSchedule s;
  s.kind_ = ScheduleKind::theorem1;
  s.horizon_ = horizon;
  s.gamma_ = gamma;
  s.sigma_ = sigma;
  return s;
}

StepSchedule StepSchedule::theorem2(double delta, double mu, double big_r, std::int64_t horizon,
                                    double beta, double d_beta, double u1_x1_sq) {
  check_horizon(horizon);
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("StepSchedule: beta must lie in [0, 1)");
  if (!(big_r > 0.0)) throw ConfigError("StepSchedule: diameter R must be positive");
  if (d_beta < 0.0) throw ConfigError("StepSchedule: path variation must be nonnegative");
  if (u1_x1_sq < 0.0) throw ConfigError("StepSchedule: ||u1-x1||^2 must be nonnegative");
  if (!(delta > 0.0) || !(delta < mu))
    throw ConfigError("StepSchedule: theorem2 needs 0 < delta < mu");
  const double big_t = static_cast<double>(horizon);
  const double numer = 2.0 * big_r * std::pow(big_t, -beta) * d_beta + big_r * big_r;
  const double denom = delta * big_r * big_r + (mu - delta) * u1_x1_sq / big_t;
  const double gamma = numer / denom;
  return theorem2_with_gamma(gamma, delta, mu, horizon);
}

StepSchedule StepSchedule::theorem2_with_gamma(double gamma, double delta, double mu,
                                               std::int64_t horizon) {
  check_horizon(horizon);
  check_theorem2_pair(gamma, delta, mu);
  StepSchedule s;
  s.kind_ = ScheduleKind::theorem2;
  s.horizon_ = horizon;
  s.gamma_ = gamma;
  s.delta_ = delta;
  s.mu_ = mu;
  return s;
}

StepSchedule StepSchedule::inverse_t(double scale, std::int64_t horizon) {
  check_horizon(horizon);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ConfigError("StepSchedule: scale must be positive and finite");
  StepSchedule s;
  s.kind_ = ScheduleKind::inverse_t;
  s.horizon_ = horizon;
  s.scale_ = scale;
  return s;
}

StepSchedule StepSchedule::constant(double scale, std::int64_t horizon) {
  StepSchedule s = inverse_t(scale, horizon);
  s.kind_ = ScheduleKind::constant;
  return s;
}

double StepSchedule::eta(std::int64_t t) const {
  if (t < 1 || t > horizon_)
    throw ConfigError("StepSchedule::eta: round index out of [1, horizon]");
  const double td = static_cast<double>(t);
  switch (kind_) {
    case ScheduleKind::theorem1: return std::pow(td, -gamma_) * sigma_;
    case ScheduleKind::theorem2: return gamma_ / td;
    case ScheduleKind::inverse_t: return scale_ / td;
    case ScheduleKind::constant: return scale_;
  }
  return 0.0;
}

ScheduleKind schedule_kind_from_string(const std::string &name) {
  if (name == "theorem1") return ScheduleKind::theorem1;
  if (name == "theorem2") return ScheduleKind::theorem2;
  if (name == "inverse_t") return ScheduleKind::inverse_t;
  if (name == "constant") return ScheduleKind::constant;
  throw ConfigError("unknown schedule kind: " + name);
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::theorem1: return "theorem1";
    case ScheduleKind::theorem2: return "theorem2";
    case ScheduleKind::inverse_t: return "inverse_t";
    case ScheduleKind::constant: return "constant";
  }
  return "?";
}

}  // namespace opg
