#pragma once

#include <random>

#include "qspin/qspin.hpp"

namespace qspin::testing {

/// Small random generator for property-style tests. Fixed seeds keep
/// failures reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec3d vec() { return {uniform(), uniform(), uniform()}; }

  Vec3d unit_vec() {
    while (true) {
      const Vec3d v = vec();
      const double n = norm(v);
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

  Quaternion quat() { return {uniform(), uniform(), uniform(), uniform()}; }

  UnitQuaternion unit_quat() { return UnitQuaternion::normalized(quat()); }

  BiQuaternion biquat() {
    return {complex(uniform(), uniform()), complex(uniform(), uniform()), complex(uniform(), uniform()),
            complex(uniform(), uniform())};
  }

 private:
  std::mt19937_64 rng_;
};

/// Plain Hamilton product (i*j = k), used as an independent oracle.
inline Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
  return {a.s0 * b.s0 - a.sx * b.sx - a.sy * b.sy - a.sz * b.sz,
          a.s0 * b.sx + a.sx * b.s0 + a.sy * b.sz - a.sz * b.sy,
          a.s0 * b.sy - a.sx * b.sz + a.sy * b.s0 + a.sz * b.sx,
          a.s0 * b.sz + a.sx * b.sy - a.sy * b.sx + a.sz * b.s0};
}

/// Rodrigues rotation matrix about unit axis m by angle a (right-handed).
inline Mat3d rodrigues(const Vec3d& m, double a) {
  const double c = std::cos(a), s = std::sin(a), t = 1.0 - c;
  Mat3d r;
  r(0, 0) = c + t * m.x * m.x;       r(0, 1) = t * m.x * m.y - s * m.z; r(0, 2) = t * m.x * m.z + s * m.y;
  r(1, 0) = t * m.y * m.x + s * m.z; r(1, 1) = c + t * m.y * m.y;       r(1, 2) = t * m.y * m.z - s * m.x;
  r(2, 0) = t * m.z * m.x - s * m.y; r(2, 1) = t * m.z * m.y + s * m.x; r(2, 2) = c + t * m.z * m.z;
  return r;
}

inline double diff(const Vec3d& a, const Vec3d& b) { return max_abs(a - b); }

}  // namespace qspin::testing
