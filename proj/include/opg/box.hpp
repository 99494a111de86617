#pragma once

#include "opg/vec.hpp"

#include <cstddef>

namespace opg {

// Axis-aligned box, the feasible set for every algorithm in this library.
// Euclidean projection is a per-coordinate clamp, which keeps every prox exact.
class BoxSet {
 public:
  BoxSet(Vec lower, Vec upper);

  // Uniform box [low, high]^dim.
  static BoxSet uniform(std::size_t dim, double low, double high);

  std::size_t dim() const { return lower_.size(); }
  const Vec &lower() const { return lower_; }
  const Vec &upper() const { return upper_; }

  bool contains(const Vec &x, double tol = 0.0) const;
  Vec project(const Vec &x) const;
  double clamp_coord(double v, std::size_t i) const;

  // Euclidean diameter sqrt(sum (upper_i - lower_i)^2); the R in every bound here.
  double diameter() const { return diameter_; }

 private:
  Vec lower_;
  Vec upper_;
  double diameter_;
};

}  // namespace opg
