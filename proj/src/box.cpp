#include "opg/box.hpp"

#include "opg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace opg {

BoxSet::BoxSet(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ConfigError("BoxSet: dimension must be positive");
  if (lower_.size() != upper_.size()) throw ConfigError("BoxSet: bound arrays differ in length");
  if (!all_finite(lower_) || !all_finite(upper_)) throw ConfigError("BoxSet: bounds must be finite");
  double d2 = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (lower_[i] > upper_[i])
      throw ConfigError("BoxSet: lower bound exceeds upper bound at coordinate " + std::to_string(i));
    const double w = upper_[i] - lower_[i];
    d2 += w * w;
  }
  diameter_ = std::sqrt(d2);
  if (diameter_ <= 0.0) throw ConfigError("BoxSet: box is a single point, diameter must be positive");
}

BoxSet BoxSet::uniform(std::size_t dim, double low, double high) {
  return BoxSet(Vec(dim, low), Vec(dim, high));
}

bool BoxSet::contains(const Vec &x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
  return true;
}

Vec BoxSet::project(const Vec &x) const {
  if (x.size() != lower_.size()) throw ConfigError("BoxSet::project: dimension mismatch");
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::clamp(x[i], lower_[i], upper_[i]);
  return r;
}

double BoxSet::clamp_coord(double v, std::size_t i) const {
  return std::clamp(v, lower_[i], upper_[i]);
}

}  // namespace opg
