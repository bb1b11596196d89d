#pragma once

/**
 * @file em_field.hpp
 * @brief Maxwell electrodynamics in the eta basis (Gaussian units).
 *
 * Conventions:
 *   - Spacetime points are (t, x, y, z); c defaults to 1.
 *   - The field tensor is the 4x4 complex matrix sum_k c_k eta_k with
 *     c = -B + iE. Its first row is (0, B - iE), which is what EmTensor
 *     stores as `f`.
 *   - The Dirac-type operator D = (i/c) d_t eta0 + d_x etax + d_y etay + d_z etaz
 *     acts by left multiplication; its transpose flips the spatial signs.
 *     With this convention D F = (4 pi / c) J reproduces the four Maxwell
 *     laws, where J = (-i c rho, j).
 *   - The potential Phi = (i phi, A). D Phi has eta0 coefficient
 *     -(d_t phi / c + div A) and spatial coefficients -(B + iE).
 *
 * All derivatives are second-order central differences taken on
 * caller-supplied analytic functions; nothing is stored on a grid.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <algorithm>
#include <numbers>
#include <string>
#include <vector>

#include "qspin/error.hpp"
#include "qspin/parallel.hpp"
#include "qspin/quaternion.hpp"

namespace qspin::em {

using SpacetimePoint = std::array<double, 4>;  // t, x, y, z

struct EmFieldSample {
  Vec3d e{};
  Vec3d b{};
};

struct FourCurrent {
  double rho = 0.0;
  Vec3d j{};
};

using ScalarFieldFn = std::function<double(const SpacetimePoint&)>;
using VectorFieldFn = std::function<Vec3d(const SpacetimePoint&)>;
using EmFieldFn = std::function<EmFieldSample(const SpacetimePoint&)>;
using SourceFn = std::function<FourCurrent(const SpacetimePoint&)>;

struct FourPotential {
  ScalarFieldFn phi;
  VectorFieldFn a;
};

/// Finite-difference step per axis (t, x, y, z).
struct Steps {
  std::array<double, 4> h{};

  Steps(double uniform) : h{uniform, uniform, uniform, uniform} {}  // NOLINT(google-explicit-constructor)
  explicit Steps(const std::array<double, 4>& per_axis) : h(per_axis) {}

  void validate() const {
    for (double v : h) {
      if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::DegenerateStep, "step must be finite and > 0");
    }
  }
};

inline void require_light_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "c must be finite and > 0");
}

// ---------------------------------------------------------------------------
// Stencils

/// (f(p + h e_axis) - f(p - h e_axis)) / 2h.
template <class Fn>
auto central_diff(const Fn& f, const SpacetimePoint& p, std::size_t axis, double h) {
  SpacetimePoint plus = p, minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  return (f(plus) - f(minus)) * (1.0 / (2.0 * h));
}

/// (f(p + h) - 2 f(p) + f(p - h)) / h^2.
template <class Fn>
auto second_diff(const Fn& f, const SpacetimePoint& p, std::size_t axis, double h) {
  SpacetimePoint plus = p, minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  return (f(plus) - f(p) * 2.0 + f(minus)) * (1.0 / (h * h));
}

/**
 * D f at p for a biquaternion-valued f: (i/c) d_t f + sum_k e_k * d_k f,
 * with e_k the unit basis quaternions and * the eta product.
 */
template <class Fn>
BiQuaternion dirac(const Fn& f, const SpacetimePoint& p, const Steps& steps, double c = 1.0) {
  steps.validate();
  require_light_speed(c);
  const BiQuaternion dt = central_diff(f, p, 0, steps.h[0]);
  BiQuaternion out = dt * complex(0.0, 1.0 / c);
  for (std::size_t k = 1; k <= 3; ++k) {
    BiQuaternion unit;
    unit[k] = 1.0;
    out += unit * BiQuaternion(central_diff(f, p, k, steps.h[k]));
  }
  return out;
}

/// D^T f: (i/c) d_t f - sum_k e_k * d_k f.
template <class Fn>
BiQuaternion dirac_transpose(const Fn& f, const SpacetimePoint& p, const Steps& steps, double c = 1.0) {
  steps.validate();
  require_light_speed(c);
  const BiQuaternion dt = central_diff(f, p, 0, steps.h[0]);
  BiQuaternion out = dt * complex(0.0, 1.0 / c);
  for (std::size_t k = 1; k <= 3; ++k) {
    BiQuaternion unit;
    unit[k] = 1.0;
    out -= unit * BiQuaternion(central_diff(f, p, k, steps.h[k]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Potentials and fields

/// B = curl A, E = -grad phi - (1/c) dA/dt.
inline EmFieldSample fields_from_potential(const FourPotential& pot, const SpacetimePoint& p, const Steps& steps,
                                           double c = 1.0) {
  steps.validate();
  require_light_speed(c);
  const Vec3d da_dt = central_diff(pot.a, p, 0, steps.h[0]);
  const Vec3d da_dx = central_diff(pot.a, p, 1, steps.h[1]);
  const Vec3d da_dy = central_diff(pot.a, p, 2, steps.h[2]);
  const Vec3d da_dz = central_diff(pot.a, p, 3, steps.h[3]);
  const Vec3d grad_phi{central_diff(pot.phi, p, 1, steps.h[1]), central_diff(pot.phi, p, 2, steps.h[2]),
                       central_diff(pot.phi, p, 3, steps.h[3])};

  EmFieldSample s;
  s.b = {da_dy.z - da_dz.y, da_dz.x - da_dx.z, da_dx.y - da_dy.x};
  s.e = -grad_phi - da_dt * (1.0 / c);
  return s;
}

/// Phi = (i phi, A) as a biquaternion-valued function.
inline auto potential_quaternion(const FourPotential& pot) {
  return [pot](const SpacetimePoint& p) {
    const Vec3d a = pot.a(p);
    return BiQuaternion(complex(0.0, pot.phi(p)), a.x, a.y, a.z);
  };
}

/// D Phi at p.
inline BiQuaternion dirac_of_potential(const FourPotential& pot, const SpacetimePoint& p, const Steps& steps,
                                       double c = 1.0) {
  return dirac(potential_quaternion(pot), p, steps, c);
}

/// (1/c) d_t phi + div A. Zero in Lorenz gauge.
inline double lorenz_gauge_residual(const FourPotential& pot, const SpacetimePoint& p, const Steps& steps,
                                    double c = 1.0) {
  steps.validate();
  require_light_speed(c);
  return central_diff(pot.phi, p, 0, steps.h[0]) / c + central_diff(pot.a, p, 1, steps.h[1]).x +
         central_diff(pot.a, p, 2, steps.h[2]).y + central_diff(pot.a, p, 3, steps.h[3]).z;
}

// ---------------------------------------------------------------------------
// Field tensor

struct EmTensor {
  Vec3c f{};  // B - iE, the first-row entries of the matrix

  /// eta coefficients (0, -B + iE).
  [[nodiscard]] BiQuaternion coefficients() const { return {complex(0.0), -f}; }

  [[nodiscard]] Mat4c matrix() const { return to_eta(coefficients()); }

  [[nodiscard]] EmFieldSample sample() const { return {-imag(f), real(f)}; }

  static EmTensor from_coefficients(const BiQuaternion& q) { return {-q.vec()}; }

  /// Lossless for any matrix in the span of eta_x, eta_y, eta_z.
  static EmTensor from_matrix(const Mat4c& m) { return from_coefficients(from_eta(m)); }
};

inline EmTensor em_tensor(const EmFieldSample& s) {
  return {to_complex(s.b) - to_complex(s.e) * complex(0.0, 1.0)};
}

/// p -> tensor coefficients (0, -B + iE) of a field function.
inline auto tensor_quaternion(const EmFieldFn& field) {
  return [field](const SpacetimePoint& p) { return em_tensor(field(p)).coefficients(); };
}

/// J = (-i c rho, j).
inline BiQuaternion current_quaternion(const FourCurrent& j, double c) {
  return {complex(0.0, -c * j.rho), to_complex(j.j)};
}

// ---------------------------------------------------------------------------
// Maxwell residuals

struct MaxwellResidual {
  double gauss_b = 0.0;  // div B
  Vec3d faraday{};       // curl E + (1/c) dB/dt
  Vec3d ampere{};        // curl B - (1/c) dE/dt - (4 pi / c) j
  double gauss_e = 0.0;  // div E - 4 pi rho

  [[nodiscard]] double max_abs() const {
    return std::max({std::abs(gauss_b), qspin::max_abs(faraday), qspin::max_abs(ampere), std::abs(gauss_e)});
  }
};

/**
 * Evaluates D F - (4 pi / c) J and splits it into the four laws:
 *   eta0:    div B - i (div E - 4 pi rho)
 *   eta_k:   (curl B - dE/dt / c - 4 pi j / c) - i (curl E + dB/dt / c)
 */
inline MaxwellResidual maxwell_residual(const EmFieldFn& field, const SourceFn& source, const SpacetimePoint& p,
                                        const Steps& steps, double c = 1.0) {
  const BiQuaternion df = dirac(tensor_quaternion(field), p, steps, c);
  const FourCurrent j = source ? source(p) : FourCurrent{};
  const BiQuaternion r = df - current_quaternion(j, c) * complex(4.0 * std::numbers::pi / c);
  MaxwellResidual out;
  out.gauss_b = r.s0.real();
  out.gauss_e = -r.s0.imag();
  out.ampere = real(r.vec());
  out.faraday = -imag(r.vec());
  return out;
}

/// (laplacian - (1/c^2) d_t^2)(B - iE) with three-point second differences.
inline Vec3c wave_residual(const EmFieldFn& field, const SpacetimePoint& p, const Steps& steps, double c = 1.0) {
  steps.validate();
  require_light_speed(c);
  auto f = [&field](const SpacetimePoint& q) { return em_tensor(field(q)).f; };
  Vec3c out = second_diff(f, p, 0, steps.h[0]) * complex(-1.0 / (c * c));
  for (std::size_t k = 1; k <= 3; ++k) out += second_diff(f, p, k, steps.h[k]);
  return out;
}

/// d_t rho + div j.
inline double continuity_residual(const SourceFn& source, const SpacetimePoint& p, const Steps& steps) {
  steps.validate();
  auto rho = [&source](const SpacetimePoint& q) { return source(q).rho; };
  auto j = [&source](const SpacetimePoint& q) { return source(q).j; };
  return central_diff(rho, p, 0, steps.h[0]) + central_diff(j, p, 1, steps.h[1]).x +
         central_diff(j, p, 2, steps.h[2]).y + central_diff(j, p, 3, steps.h[3]).z;
}

/// Behaviour of one residual over a sequence of decreasing steps. A residual
/// that stays below `exact_tol` at every step counts as exact; otherwise the
/// ratios and orders between consecutive steps are reported.
struct Convergence {
  bool exact = false;
  double min_ratio = 0.0;  // min r[i] / r[i+1]
  double min_order = 0.0;  // min log(r[i] / r[i+1]) / log(h[i] / h[i+1])
};

inline Convergence convergence(const std::vector<double>& h, const std::vector<double>& r, double exact_tol = 1e-13) {
  if (h.size() != r.size() || h.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "need matching step and residual lists of length >= 2");
  }
  Convergence out;
  out.exact = std::all_of(r.begin(), r.end(), [&](double v) { return std::abs(v) <= exact_tol; });
  if (out.exact) {
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.min_order = std::numeric_limits<double>::infinity();
    return out;
  }
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const double ratio = std::abs(r[i]) / std::abs(r[i + 1]);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.min_order = std::min(out.min_order, std::log(ratio) / std::log(h[i] / h[i + 1]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic forms

struct EnergyForm {
  double w0 = 0.0;  // (E^2 + B^2) / 2
  Vec3d flux{};     // E x B
};

inline EnergyForm energy_quadratic(const EmFieldSample& s) {
  return {0.5 * (norm2(s.e) + norm2(s.b)), cross(s.e, s.b)};
}

struct FieldInvariants {
  double i1 = 0.0;  // (B^2 - E^2) / 2
  double i2 = 0.0;  // E . B
};

inline FieldInvariants lorentz_invariants(const EmFieldSample& s) {
  return {0.5 * (norm2(s.b) - norm2(s.e)), dot(s.e, s.b)};
}

// ---------------------------------------------------------------------------
// Sample lattices

/// Regular lattice of sample points. Stencil steps are chosen separately,
/// so a single point (dims = 1) is a valid grid.
struct GridSpec {
  SpacetimePoint origin{};
  std::array<double, 4> spacing{1.0, 1.0, 1.0, 1.0};
  std::array<std::size_t, 4> dims{1, 1, 1, 1};
  double c_light = 1.0;

  void validate() const {
    for (std::size_t a = 0; a < 4; ++a) {
      if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]) || !std::isfinite(origin[a])) {
        throw Error(ErrorKind::InvalidArgument, "grid spacing must be finite and > 0");
      }
      if (dims[a] == 0) throw Error(ErrorKind::InvalidArgument, "grid dims must be >= 1");
    }
    require_light_speed(c_light);
  }

  [[nodiscard]] std::size_t size() const { return dims[0] * dims[1] * dims[2] * dims[3]; }

  /// Point i in t-slowest, z-fastest order.
  [[nodiscard]] SpacetimePoint point(std::size_t i) const {
    SpacetimePoint p = origin;
    for (std::size_t a = 4; a-- > 0;) {
      p[a] += spacing[a] * static_cast<double>(i % dims[a]);
      i /= dims[a];
    }
    return p;
  }
};

/// Largest |residual| of fn over every lattice point. Evaluation order is
/// irrelevant to the result; `threads` only changes wall time.
template <class Fn>
double max_over_grid(const GridSpec& grid, Fn&& fn, unsigned threads = 1) {
  grid.validate();
  std::vector<double> values(grid.size());
  parallel_for(values.size(), threads, [&](std::size_t i) { values[i] = fn(grid.point(i)); });
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

}  // namespace qspin::em
