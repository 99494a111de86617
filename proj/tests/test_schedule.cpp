#include "opg/errors.hpp"
#include "opg/schedule.hpp"

#include <doctest.h>

#include <cmath>

using namespace opg;

TEST_CASE("horizon-tuned square-root schedule derives its scale") {
  // R=2, M=1, T=100, beta=0, gamma=0.5, D=10:
  // sigma = sqrt(0.5*2*2*T^0*10 + 4*T^0) / 1 = sqrt(24)
  const auto s = StepSchedule::theorem1(0.5, 0.0, 2.0, 1.0, 100, 10.0);
  CHECK(s.sigma() == doctest::Approx(std::sqrt(24.0)).epsilon(1e-12));
  CHECK(s.sigma() == doctest::Approx(4.898979485566356).epsilon(1e-12));
  CHECK(s.eta(1) == doctest::Approx(s.sigma()));
  CHECK(s.eta(4) == doctest::Approx(s.sigma() / 2.0));
}

TEST_CASE("inverse-t schedule") {
  const auto s = StepSchedule::inverse_t(0.001, 100);
  CHECK(s.eta(10) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(s.eta(1) == doctest::Approx(0.001));
}

TEST_CASE("strongly convex schedule rejects the boundary family") {
  // With D=0 and q=0 the derived gamma is 1/delta, so gamma*delta = 1 for every
  // delta in (0, mu); the whole family must be refused.
  for (double delta : {0.5, 0.4, 0.25}) {
    CHECK_THROWS_AS(StepSchedule::theorem2(delta, 1.0, 1.0, 100, 0.0, 0.0, 0.0), ConfigError);
  }
  // a positive ||u1 - x1||^2 restores feasibility
  const auto s = StepSchedule::theorem2(0.5, 1.0, 1.0, 100, 0.0, 0.0, 0.25);
  const double gamma = s.gamma();
  CHECK(gamma * 0.5 < 1.0);
  CHECK(gamma == doctest::Approx(1.0 / (0.5 + 0.5 * 0.25 / 100.0)));
  CHECK(s.eta(2) == doctest::Approx(gamma / 2.0));
}

TEST_CASE("explicit-gamma strongly convex schedule validates gamma*delta") {
  const auto s = StepSchedule::theorem2_with_gamma(1.0, 0.5, 1.0, 50);
  CHECK(s.eta(10) == doctest::Approx(0.1));
  CHECK_THROWS_AS(StepSchedule::theorem2_with_gamma(2.0, 0.5, 1.0, 50), ConfigError);
  CHECK_THROWS_AS(StepSchedule::theorem2_with_gamma(1.0, 1.0, 1.0, 50), ConfigError);  // delta=mu
  CHECK_THROWS_AS(StepSchedule::theorem2_with_gamma(1.0, 0.0, 1.0, 50), ConfigError);
}

TEST_CASE("power schedule validates gamma against beta") {
  CHECK_THROWS_AS(StepSchedule::theorem1(0.3, 0.5, 2.0, 1.0, 100, 1.0), ConfigError);
  CHECK_THROWS_AS(StepSchedule::theorem1(1.0, 0.0, 2.0, 1.0, 100, 1.0), ConfigError);
  CHECK_THROWS_AS(StepSchedule::theorem1_with_sigma(0.5, -1.0, 100), ConfigError);
  CHECK_NOTHROW(StepSchedule::theorem1(0.5, 0.5, 2.0, 1.0, 100, 1.0));  // gamma = beta allowed
}

TEST_CASE("every schedule kind is non-increasing and range-checked") {
  const auto check = [](const StepSchedule &s) {
    double prev = s.eta(1);
    CHECK(prev > 0.0);
    for (std::int64_t t = 2; t <= s.horizon(); ++t) {
      const double cur = s.eta(t);
      CHECK(cur > 0.0);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
    CHECK_THROWS_AS(s.eta(0), ConfigError);
    CHECK_THROWS_AS(s.eta(s.horizon() + 1), ConfigError);
  };
  check(StepSchedule::theorem1(0.5, 0.0, 2.0, 1.0, 64, 3.0));
  check(StepSchedule::theorem1_with_sigma(0.7, 2.0, 64));
  check(StepSchedule::theorem2_with_gamma(1.0, 0.5, 1.0, 64));
  check(StepSchedule::theorem2(0.5, 1.0, 2.0, 64, 0.0, 0.0, 0.5));
  check(StepSchedule::inverse_t(0.001, 64));
  check(StepSchedule::constant(0.01, 64));
}

TEST_CASE("schedule kind strings") {
  CHECK(schedule_kind_from_string("theorem1") == ScheduleKind::theorem1);
  CHECK(schedule_kind_from_string("constant") == ScheduleKind::constant);
  CHECK(to_string(ScheduleKind::inverse_t) == "inverse_t");
  CHECK_THROWS_AS(schedule_kind_from_string("bogus"), ConfigError);
}
