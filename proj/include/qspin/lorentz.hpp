#pragma once

/**
 * @file lorentz.hpp
 * @brief Rotations and boosts acting on the field tensor by F' = L F L^T.
 *
 * A rotation is the real unit quaternion (cos(a/2), m sin(a/2)). A boost of
 * rapidity phi uses the same layout with hyperbolic functions, and its 4x4
 * realization carries an imaginary vector part:
 *
 *     L = cosh(phi/2) eta0 + i sinh(phi/2) (m . eta),
 *
 * so that L L^T = (cosh^2 - sinh^2) eta0 = eta0 and conjugation acts on the
 * field triple F = -B + iE as a rotation by the complex angle i*phi.
 */

#include <cmath>
#include <string>

#include "qspin/em_field.hpp"
#include "qspin/error.hpp"
#include "qspin/quaternion.hpp"

namespace qspin::lorentz {

using em::EmFieldSample;
using em::EmTensor;

enum class Kind { rotation, boost };

struct LorentzQuat {
  double nu0 = 1.0;
  Vec3d nu{};
  Kind kind = Kind::rotation;

  /// Coefficients of the 4x4 realization.
  [[nodiscard]] BiQuaternion biquaternion() const {
    if (kind == Kind::rotation) return {complex(nu0), to_complex(nu)};
    return {complex(nu0), to_complex(nu) * complex(0.0, 1.0)};
  }

  [[nodiscard]] Mat4c matrix() const { return to_eta(biquaternion()); }
  [[nodiscard]] Mat4c transpose_matrix() const { return transpose(matrix()); }

  /// nu0^2 + |nu|^2 - 1 for rotations, nu0^2 - |nu|^2 - 1 for boosts.
  [[nodiscard]] double constraint_defect() const {
    const double v2 = norm2(nu);
    return kind == Kind::rotation ? nu0 * nu0 + v2 - 1.0 : nu0 * nu0 - v2 - 1.0;
  }
};

namespace detail {

inline void require_unit_axis(const Vec3d& m) {
  const double n = norm(m);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitInputTol) {
    throw Error(ErrorKind::NonUnitAxis, "|m| = " + std::to_string(n));
  }
}

}  // namespace detail

inline LorentzQuat rotation_generator(const Vec3d& m, double alpha) {
  detail::require_unit_axis(m);
  return {std::cos(0.5 * alpha), m * std::sin(0.5 * alpha), Kind::rotation};
}

inline LorentzQuat boost_generator(const Vec3d& m, double rapidity) {
  detail::require_unit_axis(m);
  return {std::cosh(0.5 * rapidity), m * std::sinh(0.5 * rapidity), Kind::boost};
}

/// artanh(beta) for |beta| < 1.
inline double rapidity_from_beta(double beta) {
  if (!(std::abs(beta) < 1.0)) throw Error(ErrorKind::SuperluminalSpeed, "|v| must be < c");
  return std::atanh(beta);
}

/// Boost into a frame moving with velocity v. v = 0 is the identity.
inline LorentzQuat boost_from_velocity(const Vec3d& v, double c = 1.0) {
  em::require_light_speed(c);
  const double speed = norm(v);
  const double phi = rapidity_from_beta(speed / c);
  if (speed == 0.0) return {1.0, {}, Kind::boost};
  return boost_generator(v / speed, phi);
}

/// F' = L F L^T on the 4x4 realizations.
inline EmTensor transform_tensor(const LorentzQuat& l, const EmTensor& f) {
  return EmTensor::from_matrix(l.matrix() * f.matrix() * l.transpose_matrix());
}

/// Complex 3x3 matrix acting on the field triple; equals the rotation
/// matrix of the (bi)quaternion coefficients.
inline Mat3<complex> triple_matrix(const LorentzQuat& l) { return rotation_matrix(l.biquaternion()); }

// ---------------------------------------------------------------------------
// Closed forms on the field triple F = -B + iE

using FieldTriple = Vec3c;

inline FieldTriple to_field_triple(const EmFieldSample& s) {
  return to_complex(s.e) * complex(0.0, 1.0) - to_complex(s.b);
}

inline EmFieldSample from_field_triple(const FieldTriple& f) { return {imag(f), -real(f)}; }

/// The tensor stores f = B - iE; the triple is its negation.
inline FieldTriple to_field_triple(const EmTensor& t) { return -t.f; }
inline EmTensor tensor_from_triple(const FieldTriple& f) { return {-f}; }

/// F cos a + m (m.F)(1 - cos a) - (m x F) sin a.
inline FieldTriple rotate_field_closed(const FieldTriple& f, const Vec3d& m, double alpha) {
  detail::require_unit_axis(m);
  const Vec3c mc = to_complex(m);
  const double ca = std::cos(alpha);
  return f * complex(ca) + mc * (dot(mc, f) * (1.0 - ca)) - cross(mc, f) * complex(std::sin(alpha));
}

/// F cosh phi + m (m.F)(1 - cosh phi) - i (m x F) sinh phi.
inline FieldTriple boost_field_closed(const FieldTriple& f, const Vec3d& m, double rapidity) {
  detail::require_unit_axis(m);
  const Vec3c mc = to_complex(m);
  const double ch = std::cosh(rapidity);
  return f * complex(ch) + mc * (dot(mc, f) * (1.0 - ch)) - cross(mc, f) * complex(0.0, std::sinh(rapidity));
}

/// Fields seen from a frame moving with velocity v:
///   E' = g E - (g-1)(E.v) v/v^2 + (g/c) v x B
///   B' = g B - (g-1)(B.v) v/v^2 - (g/c) v x E
inline EmFieldSample eb_boost(const Vec3d& e, const Vec3d& b, const Vec3d& v, double c = 1.0) {
  em::require_light_speed(c);
  const double v2 = norm2(v);
  if (!(v2 < c * c)) throw Error(ErrorKind::SuperluminalSpeed, "|v| must be < c");
  if (v2 == 0.0) return {e, b};
  const double g = 1.0 / std::sqrt(1.0 - v2 / (c * c));
  EmFieldSample out;
  out.e = e * g - v * ((g - 1.0) * dot(e, v) / v2) + cross(v, b) * (g / c);
  out.b = b * g - v * ((g - 1.0) * dot(b, v) / v2) - cross(v, e) * (g / c);
  return out;
}

}  // namespace qspin::lorentz
