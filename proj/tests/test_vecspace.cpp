#include "opg/box.hpp"
#include "opg/errors.hpp"
#include "opg/rng.hpp"
#include "opg/vec.hpp"

#include <doctest.h>

#include <cmath>

using namespace opg;

TEST_CASE("vector helpers") {
  Vec a{1.0, 2.0}, b{3.0, -1.0};
  CHECK(dot(a, b) == doctest::Approx(1.0));
  CHECK(norm_sq(b) == doctest::Approx(10.0));
  CHECK(norm(Vec{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(dist(a, b) == doctest::Approx(std::sqrt(4.0 + 9.0)));
  const Vec c = axpy(a, 2.0, b);
  CHECK(c[0] == doctest::Approx(7.0));
  CHECK(c[1] == doctest::Approx(0.0));
  CHECK(sign(0.0) == 0.0);
  CHECK(sign(-3.0) == -1.0);
  CHECK(sign(0.5) == 1.0);
}

TEST_CASE("projection clamps per coordinate") {
  const BoxSet unit = BoxSet::uniform(2, -1.0, 1.0);
  CHECK(unit.project({2.0, 0.5}) == Vec{1.0, 0.5});
  CHECK(unit.project({0.0, 0.0}) == Vec{0.0, 0.0});
  const BoxSet pos({0.0, 0.0}, {2.0, 2.0});
  CHECK(pos.project({-3.0, 5.0}) == Vec{0.0, 2.0});
}

TEST_CASE("diameter values") {
  CHECK(BoxSet::uniform(1, -1.0, 1.0).diameter() == doctest::Approx(2.0));
  CHECK(BoxSet({0.0, 0.0}, {3.0, 4.0}).diameter() == doctest::Approx(5.0));
  CHECK(BoxSet({0.0, 0.0}, {0.0, 1.0}).diameter() == doctest::Approx(1.0));
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS(BoxSet({}, {}), ConfigError);
  CHECK_THROWS_AS(BoxSet({0.0}, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(BoxSet({1.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(BoxSet({0.0}, {0.0}), ConfigError);  // zero diameter
}

TEST_CASE("projection properties on random points") {
  Rng rng(11);
  const BoxSet box({-1.0, 0.0, -2.0}, {1.0, 3.0, -0.5});
  for (int k = 0; k < 1000; ++k) {
    Vec x(3), s(3);
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] = rng.uniform(-5.0, 5.0);
      s[i] = rng.uniform(box.lower()[i], box.upper()[i]);
    }
    const Vec p = box.project(x);
    CHECK(box.contains(p));
    CHECK(box.project(p) == p);  // idempotent, exactly
    // p is the nearest feasible point, so no sampled feasible s beats it.
    CHECK(dist(p, x) <= dist(s, x) + 1e-12);
    // any two feasible points are within the diameter
    CHECK(dist(box.project(x), s) <= box.diameter() + 1e-12);
  }
}
