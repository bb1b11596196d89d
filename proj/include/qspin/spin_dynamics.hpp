#pragma once

/**
 * @file spin_dynamics.hpp
 * @brief Spin-1/2 evolution in the quaternion representation.
 *
 * Three routes to the same physics:
 *   - stepwise propagation through a periodic magnetic structure (bars and
 *     films, each a fixed rotation),
 *   - fixed-step RK4 integration of ds/dt = -(gamma/2) (eta.B) s for an
 *     arbitrary time-dependent field,
 *   - closed-form solutions for the helical resonance field.
 *
 * Fields enter in phase units: what the integrator sees is the angular rate
 * vector gamma*B. Callers holding (B, gamma) pairs pass `coupling = gamma`.
 * The electron form with mu_e/hbar corresponds to coupling = 2*mu_e/hbar.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qspin/error.hpp"
#include "qspin/parallel.hpp"
#include "qspin/quaternion.hpp"

namespace qspin {

using PolarizationVector = Vec3d;

inline void require_unit_polarization(const PolarizationVector& p) {
  const double n = norm(p);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitInputTol) {
    throw Error(ErrorKind::NonUnitPolarization, "|P| = " + std::to_string(n));
  }
}

/// Polarization tail and arrow tip (P_n, P_{n,xi1}) for one block boundary.
struct ArrowPair {
  Vec3d tail;
  Vec3d tip;
};

struct SpinTrajectory {
  std::vector<double> times;
  std::vector<UnitQuaternion> states;
  std::vector<ArrowPair> polar;  // empty unless the producer defines arrows
  double max_step_drift = 0.0;   // largest |norm - 1| seen before renormalizing

  [[nodiscard]] std::size_t size() const { return states.size(); }
};

// ---------------------------------------------------------------------------
// Periodic magnetic structure

/// How bar k is oriented in the transverse plane.
enum class BarSchedule {
  fixed,       // every bar at angle theta; the chain is the power (R2 R1)^n
  cumulative,  // bar k at angle k*theta
};

struct PmsConfig {
  int n_blocks = 0;
  double xi1 = 0.0;    // bar phase
  double xi2 = 0.0;    // film phase
  double theta = 0.0;  // bar orientation angle
  BarSchedule schedule = BarSchedule::fixed;

  void validate() const {
    if (n_blocks < 0) throw Error(ErrorKind::InvalidArgument, "n_blocks must be >= 0");
    if (!std::isfinite(xi1) || !std::isfinite(xi2) || !std::isfinite(theta)) {
      throw Error(ErrorKind::InvalidArgument, "PMS phases must be finite");
    }
  }

  /// 2*N*theta == 2*pi within tol.
  [[nodiscard]] bool is_resonant(double tol = 1e-9) const {
    return std::abs(2.0 * n_blocks * theta - 2.0 * std::numbers::pi) < tol;
  }

  [[nodiscard]] double bar_angle(int k) const {
    return schedule == BarSchedule::fixed ? theta : k * theta;
  }
};

struct PmsBlock {
  UnitQuaternion bar;   // u1
  UnitQuaternion film;  // u2
};

namespace detail {

inline PmsBlock pms_block_unchecked(const PmsConfig& cfg, int k) {
  const double a = cfg.bar_angle(k);
  const double s1 = std::sin(0.5 * cfg.xi1);
  const auto bar = UnitQuaternion::normalized({std::cos(0.5 * cfg.xi1), s1 * std::cos(a), s1 * std::sin(a), 0.0});
  const auto film = UnitQuaternion::normalized({std::cos(0.5 * cfg.xi2), 0.0, std::sin(0.5 * cfg.xi2), 0.0});
  return {bar, film};
}

}  // namespace detail

/// Bar and film generators of block k, 0 <= k < N.
inline PmsBlock pms_block_generators(const PmsConfig& cfg, int k) {
  cfg.validate();
  if (k < 0 || k >= cfg.n_blocks) {
    throw Error(ErrorKind::IndexOutOfRange,
                "block " + std::to_string(k) + " not in [0, " + std::to_string(cfg.n_blocks) + ")");
  }
  return detail::pms_block_unchecked(cfg, k);
}

/**
 * Walks the polarization through N blocks. Entry n (n = 0..N) holds the
 * accumulated spin quaternion Q_n and the arrow (P_n, P_{n,xi1}) with
 *
 *     P_n       = R(Q_n) P0,           Q_{n+1} = u2 * u1(n) * Q_n
 *     P_{n,xi1} = R(u1(n) * Q_n) P0.
 *
 * `times` holds the block index n.
 */
inline SpinTrajectory pms_propagate(const PmsConfig& cfg, const PolarizationVector& p0) {
  cfg.validate();
  require_unit_polarization(p0);

  SpinTrajectory out;
  const auto n_entries = static_cast<std::size_t>(cfg.n_blocks) + 1;
  out.times.reserve(n_entries);
  out.states.reserve(n_entries);
  out.polar.reserve(n_entries);

  UnitQuaternion q;
  for (int n = 0; n <= cfg.n_blocks; ++n) {
    const PmsBlock block = detail::pms_block_unchecked(cfg, n);
    const UnitQuaternion after_bar = UnitQuaternion::normalized(block.bar.value() * q.value());
    out.times.push_back(static_cast<double>(n));
    out.states.push_back(q);
    out.polar.push_back({rotate(q, p0), rotate(after_bar, p0)});

    const Quaternion next = block.film.value() * after_bar.value();
    out.max_step_drift = std::max(out.max_step_drift, std::abs(next.norm() - 1.0));
    q = UnitQuaternion::normalized(next);
  }
  return out;
}

/// Distance between the last and first polarization tails.
inline double closure_distance(const SpinTrajectory& traj) {
  if (traj.polar.empty()) throw Error(ErrorKind::InvalidArgument, "trajectory has no polarization arrows");
  return norm(traj.polar.back().tail - traj.polar.front().tail);
}

// ---------------------------------------------------------------------------
// Spin ODE

/// The antisymmetric generator (eta . B) = Bx*etax + By*etay + Bz*etaz.
inline Mat4d eta_dot(const Vec3d& b) { return to_eta(Quaternion(0.0, b)); }

/// ds/dt = -(coupling/2) (eta . B) s.
inline Quaternion spin_ode_rhs(const Vec3d& b, const Quaternion& s, double coupling) {
  return (Quaternion(0.0, b) * s) * (-0.5 * coupling);
}

struct IntegrateOptions {
  double coupling = 1.0;
  std::size_t record_stride = 1;  // keep every k-th step (the last state is always kept)
  double max_step_angle = 0.5;    // rad; dt*|coupling*B| above this is rejected
};

/**
 * Classical RK4 with fixed step and renormalization after every step. The
 * generator is antisymmetric, so renormalization only strips round-off and
 * the O(dt^6) RK4 norm defect. The final step is shortened to land on t1.
 */
template <class FieldFn>
SpinTrajectory integrate_spin(FieldFn&& field, const UnitQuaternion& s0, double t0, double t1, double dt,
                              const IntegrateOptions& opt = {}) {
  if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorKind::InvalidTimeSpan, "need finite t1 > t0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidTimeSpan, "need dt > 0");
  const std::size_t stride = std::max<std::size_t>(1, opt.record_stride);

  const double span = t1 - t0;
  auto n_full = static_cast<std::size_t>(std::floor(span / dt));
  // Snap a remainder that is only round-off onto the last full step.
  const double rem = span - static_cast<double>(n_full) * dt;
  const bool partial = rem > 1e-9 * dt;
  const std::size_t n_steps = n_full + (partial ? 1 : 0);

  auto rate = [&](double t, const Quaternion& s) {
    const Vec3d b = field(t);
    return spin_ode_rhs(b, s, opt.coupling);
  };
  auto check_step = [&](double t, double h) {
    const double angle = h * std::abs(opt.coupling) * norm(Vec3d(field(t)));
    if (!(angle <= opt.max_step_angle)) {
      throw Error(ErrorKind::StepTooLarge, "dt*|gamma B| = " + std::to_string(angle) + " rad at t = " +
                                               std::to_string(t));
    }
  };

  SpinTrajectory out;
  out.times.reserve(n_steps / stride + 2);
  out.states.reserve(n_steps / stride + 2);
  out.times.push_back(t0);
  out.states.push_back(s0);

  Quaternion s = s0.value();
  double t = t0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_next = (k + 1 == n_steps) ? t1 : t0 + static_cast<double>(k + 1) * dt;
    const double h = t_next - t;
    check_step(t, h);
    check_step(t + h, h);

    const Quaternion k1 = rate(t, s);
    const Quaternion k2 = rate(t + 0.5 * h, s + k1 * (0.5 * h));
    const Quaternion k3 = rate(t + 0.5 * h, s + k2 * (0.5 * h));
    const Quaternion k4 = rate(t + h, s + k3 * h);
    const Quaternion next = s + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);

    const double n = next.norm();
    out.max_step_drift = std::max(out.max_step_drift, std::abs(n - 1.0));
    s = next * (1.0 / n);
    t = t_next;

    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      out.times.push_back(t);
      out.states.push_back(UnitQuaternion::normalized(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Helical resonance field

/// Resonance width, detuning and drive frequency (angular rates).
struct HelicalParams {
  double gamma_width = 0.0;
  double delta_detune = 0.0;
  double omega_drive = 0.0;

  [[nodiscard]] double rabi() const { return std::hypot(gamma_width, delta_detune); }

  void validate() const {
    if (!std::isfinite(gamma_width) || !std::isfinite(delta_detune) || !std::isfinite(omega_drive)) {
      throw Error(ErrorKind::DegenerateParams, "helical parameters must be finite");
    }
    if (gamma_width < 0.0) throw Error(ErrorKind::DegenerateParams, "Gamma must be >= 0");
    if (rabi() == 0.0) throw Error(ErrorKind::DegenerateParams, "Gamma^2 + Delta^2 must be > 0");
  }
};

/// Physical description: rotating transverse field b, axial B_z, drive
/// frequency omega and gyromagnetic ratio.
struct HelicalFieldSpec {
  double b_transverse = 0.0;
  double bz_axial = 0.0;
  double omega_drive = 0.0;
  double gyromagnetic = 1.0;

  /// Omega* = gamma * sqrt(Bz^2 + b^2).
  [[nodiscard]] double larmor() const { return gyromagnetic * std::hypot(bz_axial, b_transverse); }

  /// Cone apex angle arctan(b/Bz), in (-pi/2, pi/2]; pi/2 when Bz == 0.
  [[nodiscard]] double apex_angle() const {
    if (bz_axial == 0.0) return std::numbers::pi / 2;
    return std::atan(b_transverse / bz_axial);
  }
};

/// Delta = omega - Omega* cos(theta), Gamma = Omega* sin(theta).
inline HelicalParams helical_params_from_field(const HelicalFieldSpec& f) {
  if (f.b_transverse == 0.0 && f.bz_axial == 0.0) {
    throw Error(ErrorKind::ZeroField, "helical field needs b != 0 or Bz != 0");
  }
  const double omega_star = f.larmor();
  const double apex = f.apex_angle();
  return {omega_star * std::sin(apex), f.omega_drive - omega_star * std::cos(apex), f.omega_drive};
}

/// The field gamma*B(t) = (Gamma cos wt, Gamma sin wt, w - Delta) in phase units.
struct HelicalField {
  HelicalParams params;

  Vec3d operator()(double t) const {
    const double w = params.omega_drive;
    return {params.gamma_width * std::cos(w * t), params.gamma_width * std::sin(w * t), w - params.delta_detune};
  }
};

/**
 * Closed-form state for the helical field starting from (1,0,0,0). With
 * W = sqrt(Gamma^2 + Delta^2), a = W t/2, b = w t/2:
 *
 *   s0 =  (Delta/W) sin a sin b + cos a cos b
 *   sx = -(Gamma/W) sin a cos b
 *   sy = -(Gamma/W) sin a sin b
 *   sz =  (Delta/W) sin a cos b - cos a sin b
 *
 * This is the lab-frame rotation about z by -w t applied after a rotation by
 * W t about (-Gamma, 0, Delta)/W in the co-rotating frame.
 */
inline UnitQuaternion analytic_helical(const HelicalParams& p, double t) {
  const double w_rabi = p.rabi();
  if (!(w_rabi > 0.0) || !std::isfinite(w_rabi)) {
    throw Error(ErrorKind::DegenerateParams, "Gamma^2 + Delta^2 must be > 0");
  }
  const double g = p.gamma_width / w_rabi;
  const double d = p.delta_detune / w_rabi;
  const double sa = std::sin(0.5 * w_rabi * t), ca = std::cos(0.5 * w_rabi * t);
  const double sb = std::sin(0.5 * p.omega_drive * t), cb = std::cos(0.5 * p.omega_drive * t);
  return UnitQuaternion::normalized({d * sa * sb + ca * cb, -g * sa * cb, -g * sa * sb, d * sa * cb - ca * sb});
}

/// Removes the drive rotation: returns F(t)^-1 * s with F(t) the rotation
/// about z by -omega*t. For the helical field this is the co-rotating state.
inline UnitQuaternion corotating_state(const UnitQuaternion& s, double omega, double t) {
  const UnitQuaternion frame = from_axis_angle({0.0, 0.0, 1.0}, -omega * t);
  return UnitQuaternion::normalized(frame.inverse().value() * s.value());
}

/// Applies the rotation of (s0, sx, sy, sign*sz) at time t to P(0).
inline PolarizationVector polarization_from_state(const Quaternion& s, int sign, const PolarizationVector& p0) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  require_unit_polarization(p0);
  const Quaternion flagged{s.s0, s.sx, s.sy, sign * s.sz};
  return quat_to_rotation(flagged) * p0;
}

inline PolarizationVector polarization_evolution(const HelicalParams& p, int sign, const PolarizationVector& p0,
                                                 double t) {
  return polarization_from_state(analytic_helical(p, t).value(), sign, p0);
}

// ---------------------------------------------------------------------------
// Resonance probabilities

namespace detail {

inline void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "passage time must be >= 0");
}

}  // namespace detail

/// Turn-down probability Gamma^2/W^2 sin^2(T W / 2). Gamma = Delta = 0 gives 0.
inline double spin_flip_probability(double t_pass, double gamma_width, double delta_detune) {
  detail::require_nonnegative_time(t_pass);
  const double w2 = gamma_width * gamma_width + delta_detune * delta_detune;
  if (w2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * t_pass * std::sqrt(w2));
  return gamma_width * gamma_width / w2 * s * s;
}

/// Revolution (stay-up) probability; complements spin_flip_probability.
inline double spin_up_probability(double t_pass, double gamma_width, double delta_detune) {
  detail::require_nonnegative_time(t_pass);
  const double w2 = gamma_width * gamma_width + delta_detune * delta_detune;
  if (w2 == 0.0) return 1.0;
  const double c = std::cos(0.5 * t_pass * std::sqrt(w2));
  return gamma_width * gamma_width / w2 * c * c + delta_detune * delta_detune / w2;
}

struct ResonancePoint {
  double delta;
  double p_down;
  double p_up;
};

/// Uniform grid of n_points detunings in [delta_min, delta_max]. A grid
/// symmetric about zero yields exactly mirrored Delta values.
inline std::vector<ResonancePoint> resonance_curve(double gamma_width, double delta_min, double delta_max,
                                                   std::size_t n_points, double t_pass, unsigned threads = 1) {
  if (n_points < 2 || !(delta_max > delta_min)) {
    throw Error(ErrorKind::EmptyRange, "need n_points >= 2 and delta_max > delta_min");
  }
  detail::require_nonnegative_time(t_pass);
  std::vector<ResonancePoint> out(n_points);
  const double denom = static_cast<double>(n_points - 1);
  parallel_for(n_points, threads, [&](std::size_t i) {
    const double fi = static_cast<double>(i);
    const double delta = (delta_min * (denom - fi) + delta_max * fi) / denom;
    out[i] = {delta, spin_flip_probability(t_pass, gamma_width, delta),
              spin_up_probability(t_pass, gamma_width, delta)};
  });
  return out;
}

}  // namespace qspin
