#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace opg {

using Vec = std::vector<double>;

inline double dot(const Vec &a, const Vec &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec &a) { return dot(a, a); }

inline double norm(const Vec &a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(const Vec &a, const Vec &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Vec &a, const Vec &b) { return std::sqrt(dist_sq(a, b)); }

inline Vec add(const Vec &a, const Vec &b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec &a, const Vec &b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Vec &a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// r = a + c*b
inline Vec axpy(const Vec &a, double c, const Vec &b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline bool all_finite(const Vec &a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace opg
