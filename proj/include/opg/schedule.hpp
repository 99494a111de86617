#pragma once

#include <cstdint>
#include <string>

namespace opg {

enum class ScheduleKind { theorem1, theorem2, inverse_t, constant };

ScheduleKind schedule_kind_from_string(const std::string &name);
std::string to_string(ScheduleKind kind);

// Non-increasing step-size sequences eta_t for t = 1..horizon. Every constructor
// validates its parameters up front, so a constructed schedule is always usable.
//
//   theorem1:  eta_t = t^{-gamma} * sigma, gamma in [beta, 1). When sigma is not
//              supplied it is derived from (R, M, T, beta, gamma, D_beta) as
//              sigma = sqrt((1-gamma)*2R*T^{2g-b-1}*D_beta + R^2*T^{2g-1}) / M.
//   theorem2:  eta_t = gamma / t with 0 < delta < mu and gamma*delta < 1. When gamma
//              is not supplied it is derived as
//              gamma = (2R*T^{-beta}*D_beta + R^2) / (delta*R^2 + (mu-delta)*q/T),
//              q = ||u_1 - x_1||^2. Constructions landing on gamma*delta >= 1 are
//              rejected (shrink delta or supply a positive q / explicit gamma).
//   inverse_t: eta_t = scale / t.
//   constant:  eta_t = scale.
class StepSchedule {
 public:
  static StepSchedule theorem1(double gamma, double beta, double big_r, double big_m,
                               std::int64_t horizon, double d_beta);
  static StepSchedule theorem1_with_sigma(double gamma, double sigma, std::int64_t horizon);
  static StepSchedule theorem2(double delta, double mu, double big_r, std::int64_t horizon,
                               double beta, double d_beta, double u1_x1_sq);
  static StepSchedule theorem2_with_gamma(double gamma, double delta, double mu,
                                          std::int64_t horizon);
  static StepSchedule inverse_t(double scale, std::int64_t horizon);
  static StepSchedule constant(double scale, std::int64_t horizon);

  double eta(std::int64_t t) const;

  ScheduleKind kind() const { return kind_; }
  std::int64_t horizon() const { return horizon_; }
  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  double delta() const { return delta_; }
  double mu() const { return mu_; }
  double scale() const { return scale_; }

 private:
  StepSchedule() = default;

  ScheduleKind kind_ = ScheduleKind::constant;
  std::int64_t horizon_ = 0;
  double gamma_ = 0.0;
  double sigma_ = 0.0;
  double delta_ = 0.0;
  double mu_ = 0.0;
  double scale_ = 0.0;
};

}  // namespace opg
