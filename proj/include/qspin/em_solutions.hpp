#pragma once

// Closed-form vacuum solutions and sources used by the residual checks.

#include <cmath>

#include "qspin/em_field.hpp"

namespace qspin::em::solutions {

inline Vec3d spatial(const SpacetimePoint& p) { return {p[1], p[2], p[3]}; }

/// Linearly polarized plane wave E = E0 e cos(k n.r - w t), B = n x E,
/// w = c k. `direction` and `polarization` must be orthonormal.
struct PlaneWave {
  Vec3d direction{0.0, 0.0, 1.0};
  Vec3d polarization{1.0, 0.0, 0.0};
  double amplitude = 1.0;
  double wavenumber = 1.0;
  double c = 1.0;

  EmFieldSample operator()(const SpacetimePoint& p) const {
    const double phase = wavenumber * dot(direction, spatial(p)) - c * wavenumber * p[0];
    const Vec3d e = polarization * (amplitude * std::cos(phase));
    return {e, cross(direction, e)};
  }
};

/// Two counter-propagating waves along x: E = 2 E0 cos(kx) cos(wt) y,
/// B = 2 E0 sin(kx) sin(wt) z.
struct StandingWave {
  double amplitude = 1.0;
  double wavenumber = 1.0;
  double c = 1.0;

  EmFieldSample operator()(const SpacetimePoint& p) const {
    const double kx = wavenumber * p[1];
    const double wt = c * wavenumber * p[0];
    return {{0.0, 2.0 * amplitude * std::cos(kx) * std::cos(wt), 0.0},
            {0.0, 0.0, 2.0 * amplitude * std::sin(kx) * std::sin(wt)}};
  }
};

/// Static Coulomb field q (r - r0)/|r - r0|^3. Singular at r0; evaluate away from it.
struct PointCharge {
  double charge = 1.0;
  Vec3d position{};

  EmFieldSample operator()(const SpacetimePoint& p) const {
    const Vec3d r = spatial(p) - position;
    const double d = norm(r);
    return {r * (charge / (d * d * d)), {}};
  }
};

struct UniformField {
  Vec3d e{};
  Vec3d b{};

  EmFieldSample operator()(const SpacetimePoint&) const { return {e, b}; }
};

/// Gaussian charge blob rho = q exp(-|r - r0 - v t|^2 / w^2) carried at
/// constant velocity, j = rho v.
struct AdvectedGaussian {
  double charge = 1.0;
  double width = 1.0;
  Vec3d start{};
  Vec3d velocity{};

  FourCurrent operator()(const SpacetimePoint& p) const {
    const Vec3d r = spatial(p) - start - velocity * p[0];
    const double rho = charge * std::exp(-norm2(r) / (width * width));
    return {rho, velocity * rho};
  }
};

/// Coulomb potential phi = q/|r - r0|, A = 0.
inline FourPotential coulomb_potential(double q, const Vec3d& position) {
  return {[q, position](const SpacetimePoint& p) { return q / norm(spatial(p) - position); },
          [](const SpacetimePoint&) { return Vec3d{}; }};
}

/// Symmetric-gauge potential of a uniform field B = (0, 0, b): A = b(-y, x, 0)/2.
inline FourPotential uniform_b_potential(double b) {
  return {[](const SpacetimePoint&) { return 0.0; },
          [b](const SpacetimePoint& p) { return Vec3d{-0.5 * b * p[2], 0.5 * b * p[1], 0.0}; }};
}

}  // namespace qspin::em::solutions
