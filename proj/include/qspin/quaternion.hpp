#pragma once

/**
 * @file quaternion.hpp
 * @brief Quaternion algebra in the real 4x4 eta basis, its SU(2) realization,
 *        spinor components and the induced SO(3) rotation.
 *
 * A quaternion q = (s0, sx, sy, sz) is identified with the real matrix
 *
 *     q0*eta0 + qx*etax + qy*etay + qz*etaz
 *
 * whose first column is (s0, sx, sy, sz). The product `a * b` is the product
 * of those matrices, so the basis obeys
 *
 *     etax*etay = -etaz,  etay*etaz = -etax,  etaz*etax = -etay,
 *     etax^2 = etay^2 = etaz^2 = -eta0.
 *
 * Note the sign: this is the opposite orientation to the Hamilton product
 * (i*j = +k). In Hamilton terms a*b here equals b (x) a. The vector part
 * transforms as  (a*b).vec = a0*b.vec + b0*a.vec - a.vec x b.vec.
 *
 * The same template is instantiated with std::complex<double> coefficients
 * for the electromagnetic tensor and Lorentz boosts.
 */

#include <cmath>
#include <complex>
#include <numbers>

#include "qspin/error.hpp"
#include "qspin/linalg.hpp"

namespace qspin {

/// Unit-norm tolerance for values built internally.
inline constexpr double kUnitConstructTol = 1e-12;
/// Unit-norm tolerance for values supplied by callers.
inline constexpr double kUnitInputTol = 1e-9;

template <class T>
struct BasicQuaternion {
  T s0{}, sx{}, sy{}, sz{};

  constexpr BasicQuaternion() = default;
  constexpr BasicQuaternion(T w, T x, T y, T z) : s0(w), sx(x), sy(y), sz(z) {}
  constexpr BasicQuaternion(T scalar, const Vec3<T>& v) : s0(scalar), sx(v.x), sy(v.y), sz(v.z) {}

  [[nodiscard]] constexpr Vec3<T> vec() const { return {sx, sy, sz}; }
  [[nodiscard]] constexpr T scalar() const { return s0; }

  constexpr T& operator[](std::size_t i) { return i == 0 ? s0 : (i == 1 ? sx : (i == 2 ? sy : sz)); }
  constexpr const T& operator[](std::size_t i) const {
    return i == 0 ? s0 : (i == 1 ? sx : (i == 2 ? sy : sz));
  }

  /// Quaternion conjugate (s0, -s). For complex coefficients the entries
  /// themselves are *not* conjugated.
  [[nodiscard]] constexpr BasicQuaternion conj() const { return {s0, -sx, -sy, -sz}; }

  /// Sum of |coefficient|^2.
  [[nodiscard]] constexpr double norm2() const {
    return detail::abs2(s0) + detail::abs2(sx) + detail::abs2(sy) + detail::abs2(sz);
  }
  [[nodiscard]] double norm() const { return std::sqrt(norm2()); }

  /// Bilinear form s0^2 + sx^2 + sy^2 + sz^2 (complex-valued for biquaternions).
  [[nodiscard]] constexpr T quadrance() const { return s0 * s0 + sx * sx + sy * sy + sz * sz; }

  constexpr BasicQuaternion& operator+=(const BasicQuaternion& o) {
    s0 += o.s0;
    sx += o.sx;
    sy += o.sy;
    sz += o.sz;
    return *this;
  }
  constexpr BasicQuaternion& operator-=(const BasicQuaternion& o) {
    s0 -= o.s0;
    sx -= o.sx;
    sy -= o.sy;
    sz -= o.sz;
    return *this;
  }
  constexpr BasicQuaternion& operator*=(const T& k) {
    s0 *= k;
    sx *= k;
    sy *= k;
    sz *= k;
    return *this;
  }

  friend constexpr BasicQuaternion operator+(BasicQuaternion a, const BasicQuaternion& b) { return a += b; }
  friend constexpr BasicQuaternion operator-(BasicQuaternion a, const BasicQuaternion& b) { return a -= b; }
  friend constexpr BasicQuaternion operator-(const BasicQuaternion& a) { return {-a.s0, -a.sx, -a.sy, -a.sz}; }
  friend constexpr BasicQuaternion operator*(BasicQuaternion a, const T& k) { return a *= k; }
  friend constexpr BasicQuaternion operator*(const T& k, BasicQuaternion a) { return a *= k; }

  /// eta-basis product; see the file comment for the orientation.
  friend constexpr BasicQuaternion operator*(const BasicQuaternion& u, const BasicQuaternion& s) {
    return {u.s0 * s.s0 - u.sx * s.sx - u.sy * s.sy - u.sz * s.sz,
            u.sx * s.s0 + u.s0 * s.sx + u.sz * s.sy - u.sy * s.sz,
            u.sy * s.s0 - u.sz * s.sx + u.s0 * s.sy + u.sx * s.sz,
            u.sz * s.s0 + u.sy * s.sx - u.sx * s.sy + u.s0 * s.sz};
  }

  friend constexpr bool operator==(const BasicQuaternion&, const BasicQuaternion&) = default;
};

using Quaternion = BasicQuaternion<double>;
using BiQuaternion = BasicQuaternion<complex>;

template <class T>
constexpr BasicQuaternion<T> quat_mul(const BasicQuaternion<T>& a, const BasicQuaternion<T>& b) {
  return a * b;
}

inline Quaternion inverse(const Quaternion& q) {
  const double n2 = q.norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error(ErrorKind::InvalidArgument, "zero quaternion has no inverse");
  return q.conj() * (1.0 / n2);
}

template <class T>
double max_abs_diff(const BasicQuaternion<T>& a, const BasicQuaternion<T>& b) {
  return std::max({std::abs(a.s0 - b.s0), std::abs(a.sx - b.sx), std::abs(a.sy - b.sy),
                   std::abs(a.sz - b.sz)});
}

inline BiQuaternion to_complex(const Quaternion& q) { return {q.s0, q.sx, q.sy, q.sz}; }

/// A quaternion known to lie on the unit 3-sphere. Construction validates.
class UnitQuaternion {
 public:
  constexpr UnitQuaternion() : q_{1.0, 0.0, 0.0, 0.0} {}

  /// Accepts q when |norm^2 - 1| <= tol, else throws NonUnitQuaternion.
  static UnitQuaternion checked(const Quaternion& q, double tol = kUnitInputTol) {
    const double n2 = q.norm2();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > tol) {
      throw Error(ErrorKind::NonUnitQuaternion, "norm^2 = " + std::to_string(n2));
    }
    return UnitQuaternion(q);
  }

  /// Projects a nonzero quaternion onto the unit sphere.
  static UnitQuaternion normalized(const Quaternion& q) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw Error(ErrorKind::NonUnitQuaternion, "cannot normalize a zero or non-finite quaternion");
    }
    return UnitQuaternion(q * (1.0 / n));
  }

  [[nodiscard]] constexpr const Quaternion& value() const { return q_; }
  constexpr operator const Quaternion&() const { return q_; }  // NOLINT(google-explicit-constructor)

  [[nodiscard]] UnitQuaternion inverse() const { return UnitQuaternion(q_.conj()); }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return UnitQuaternion(a.q_ * b.q_);
  }
  friend UnitQuaternion operator-(const UnitQuaternion& a) { return UnitQuaternion(-a.q_); }

 private:
  explicit constexpr UnitQuaternion(const Quaternion& q) : q_(q) {}
  Quaternion q_;
};

// ---------------------------------------------------------------------------
// eta basis

namespace eta {

inline constexpr Mat4d e0 = Mat4d::identity();

inline constexpr Mat4d ex = [] {
  Mat4d m;
  m(0, 1) = -1;
  m(1, 0) = 1;
  m(2, 3) = 1;
  m(3, 2) = -1;
  return m;
}();

inline constexpr Mat4d ey = [] {
  Mat4d m;
  m(0, 2) = -1;
  m(1, 3) = -1;
  m(2, 0) = 1;
  m(3, 1) = 1;
  return m;
}();

inline constexpr Mat4d ez = [] {
  Mat4d m;
  m(0, 3) = -1;
  m(1, 2) = 1;
  m(2, 1) = -1;
  m(3, 0) = 1;
  return m;
}();

/// Basis matrix by index 0..3 (0 = identity).
constexpr const Mat4d& basis(std::size_t i) {
  switch (i) {
    case 0: return e0;
    case 1: return ex;
    case 2: return ey;
    default: return ez;
  }
}

}  // namespace eta

/// Left-multiplication matrix of q: to_eta(q) * s == (q * s) as 4-vectors.
template <class T>
constexpr Mat4<T> to_eta(const BasicQuaternion<T>& q) {
  Mat4<T> m;
  m(0, 0) = q.s0;  m(0, 1) = -q.sx; m(0, 2) = -q.sy; m(0, 3) = -q.sz;
  m(1, 0) = q.sx;  m(1, 1) = q.s0;  m(1, 2) = q.sz;  m(1, 3) = -q.sy;
  m(2, 0) = q.sy;  m(2, 1) = -q.sz; m(2, 2) = q.s0;  m(2, 3) = q.sx;
  m(3, 0) = q.sz;  m(3, 1) = q.sy;  m(3, 2) = -q.sx; m(3, 3) = q.s0;
  return m;
}

/// Reads the coefficients back from a matrix in the span of the eta basis.
/// Each coefficient is the average of the four entries that carry it, so
/// any matrix produced by to_eta round-trips exactly.
template <class T>
constexpr BasicQuaternion<T> from_eta(const Mat4<T>& m) {
  const T quarter = T(0.25);
  return {(m(0, 0) + m(1, 1) + m(2, 2) + m(3, 3)) * quarter,
          (m(1, 0) - m(0, 1) + m(2, 3) - m(3, 2)) * quarter,
          (m(2, 0) - m(0, 2) + m(3, 1) - m(1, 3)) * quarter,
          (m(3, 0) - m(0, 3) + m(1, 2) - m(2, 1)) * quarter};
}

/// Largest deviation of m from the eta-span (0 for matrices built by to_eta).
template <class T>
double eta_residual(const Mat4<T>& m) {
  return max_abs_diff(m, to_eta(from_eta(m)));
}

template <class T>
constexpr BasicQuaternion<T> operator*(const Mat4<T>& m, const BasicQuaternion<T>& s) {
  BasicQuaternion<T> r;
  for (std::size_t i = 0; i < 4; ++i) {
    r[i] = m(i, 0) * s.s0 + m(i, 1) * s.sx + m(i, 2) * s.sy + m(i, 3) * s.sz;
  }
  return r;
}

// ---------------------------------------------------------------------------
// SU(2) realization and spinors

namespace pauli {

inline const Mat2c s0 = Mat2c::identity();
inline const Mat2c sx = [] {
  Mat2c m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}();
inline const Mat2c sy = [] {
  Mat2c m;
  m(0, 1) = complex(0.0, -1.0);
  m(1, 0) = complex(0.0, 1.0);
  return m;
}();
inline const Mat2c sz = [] {
  Mat2c m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}();

}  // namespace pauli

/// u0*sigma0 + i*ux*sigmax + i*uy*sigmay + i*uz*sigmaz.
inline Mat2c to_su2(const Quaternion& q) {
  Mat2c m;
  m(0, 0) = complex(q.s0, q.sz);
  m(0, 1) = complex(q.sy, q.sx);
  m(1, 0) = complex(-q.sy, q.sx);
  m(1, 1) = complex(q.s0, -q.sz);
  return m;
}

struct Spinor2 {
  complex up;
  complex down;
};

/// up = s0 + i*sz, down = i*(sx + i*sy).
inline Spinor2 to_spinor(const Quaternion& q) {
  return {complex(q.s0, q.sz), complex(0.0, 1.0) * complex(q.sx, q.sy)};
}

// ---------------------------------------------------------------------------
// Rotations

/// (cos(xi/2), b*sin(xi/2)). The axis must be unit length within 1e-9.
inline UnitQuaternion from_axis_angle(const Vec3d& axis, double xi) {
  const double n2 = norm2(axis);
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > kUnitInputTol) {
    throw Error(ErrorKind::NonUnitAxis, "|b| = " + std::to_string(std::sqrt(n2)));
  }
  const double c = std::cos(0.5 * xi);
  const double s = std::sin(0.5 * xi);
  return UnitQuaternion::normalized({c, axis.x * s, axis.y * s, axis.z * s});
}

/// Precession angle -gamma*|B|*dtau accumulated over a proper-time interval.
inline double precession_angle(const Vec3d& field, double gamma, double dtau) {
  if (!(dtau >= 0.0)) throw Error(ErrorKind::InvalidArgument, "dtau must be >= 0");
  return -gamma * norm(field) * dtau;
}

/// Generator of the spin shift over dtau in a constant field: axis B/|B|,
/// angle precession_angle(B, gamma, dtau). Zero field gives the identity.
inline UnitQuaternion precession_generator(const Vec3d& field, double gamma, double dtau) {
  const double b = norm(field);
  const double xi = precession_angle(field, gamma, dtau);
  if (b == 0.0) return {};
  return from_axis_angle(field / b, xi);
}

/// Rotation matrix of a (possibly complex) quaternion, no norm check.
/// R(q) P == vec(q * (0,P) * q^-1) for unit q.
template <class T>
constexpr Mat3<T> rotation_matrix(const BasicQuaternion<T>& q) {
  const T w = q.s0, x = q.sx, y = q.sy, z = q.sz;
  const T one(1), two(2);
  Mat3<T> r;
  r(0, 0) = one - two * (y * y + z * z);
  r(0, 1) = two * (x * y + w * z);
  r(0, 2) = two * (z * x - w * y);
  r(1, 0) = two * (y * x - w * z);
  r(1, 1) = one - two * (z * z + x * x);
  r(1, 2) = two * (y * z + w * x);
  r(2, 0) = two * (z * x + w * y);
  r(2, 1) = two * (y * z - w * x);
  r(2, 2) = one - two * (x * x + y * y);
  return r;
}

/// SO(3) image of a unit quaternion; R(q) == R(-q).
inline Mat3d quat_to_rotation(const Quaternion& q) {
  const double n2 = q.norm2();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitInputTol) {
    throw Error(ErrorKind::NonUnitQuaternion, "norm^2 = " + std::to_string(n2));
  }
  return rotation_matrix(q);
}

inline Mat3d quat_to_rotation(const UnitQuaternion& q) { return rotation_matrix(q.value()); }

/// Rotates P by q: vec(q * (0,P) * q^-1).
inline Vec3d rotate(const UnitQuaternion& q, const Vec3d& p) {
  const Quaternion& u = q.value();
  return (u * Quaternion(0.0, p) * u.conj()).vec();
}

}  // namespace qspin
