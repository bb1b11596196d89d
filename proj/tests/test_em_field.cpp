#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace qspin;
using namespace qspin::em;
using qspin::testing::diff;
using qspin::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_c(const Vec3c& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }

/// Residuals at h and h/2; returns r(h) / r(h/2).
template <class Fn>
double halving_ratio(Fn&& residual, double h) {
  return residual(h) / residual(0.5 * h);
}

/// Componentwise Maxwell residual built directly from central differences of
/// E and B, independent of the quaternion route.
MaxwellResidual direct_maxwell(const EmFieldFn& field, const SpacetimePoint& p, double h, double c) {
  auto e = [&](const SpacetimePoint& q) { return field(q).e; };
  auto b = [&](const SpacetimePoint& q) { return field(q).b; };
  const Vec3d de[4] = {central_diff(e, p, 0, h), central_diff(e, p, 1, h), central_diff(e, p, 2, h),
                       central_diff(e, p, 3, h)};
  const Vec3d db[4] = {central_diff(b, p, 0, h), central_diff(b, p, 1, h), central_diff(b, p, 2, h),
                       central_diff(b, p, 3, h)};
  const Vec3d curl_e{de[2].z - de[3].y, de[3].x - de[1].z, de[1].y - de[2].x};
  const Vec3d curl_b{db[2].z - db[3].y, db[3].x - db[1].z, db[1].y - db[2].x};
  MaxwellResidual r;
  r.gauss_b = db[1].x + db[2].y + db[3].z;
  r.gauss_e = de[1].x + de[2].y + de[3].z;
  r.faraday = curl_e + db[0] * (1.0 / c);
  r.ampere = curl_b - de[0] * (1.0 / c);
  return r;
}

const SpacetimePoint kP{0.3, 0.2, -0.4, 0.7};

}  // namespace

// ---------------------------------------------------------------------------
// Potentials

TEST(FieldsFromPotential, ZeroPotential) {
  const FourPotential zero{[](const SpacetimePoint&) { return 0.0; },
                           [](const SpacetimePoint&) { return Vec3d{}; }};
  const EmFieldSample s = fields_from_potential(zero, kP, 0.01);
  EXPECT_EQ(s.e, Vec3d{});
  EXPECT_EQ(s.b, Vec3d{});
}

TEST(FieldsFromPotential, SymmetricGaugeGivesUniformB) {
  const EmFieldSample s = fields_from_potential(solutions::uniform_b_potential(1.0), kP, 0.01);
  EXPECT_LT(diff(s.b, {0, 0, 1}), 1e-13);
  EXPECT_LT(diff(s.e, {0, 0, 0}), 1e-13);
}

TEST(FieldsFromPotential, CoulombField) {
  const Vec3d r0{0.1, 0.0, -0.2};
  const FourPotential pot = solutions::coulomb_potential(2.0, r0);
  const solutions::PointCharge exact{2.0, r0};
  const auto err = [&](double h) { return diff(fields_from_potential(pot, kP, h).e, exact(kP).e); };
  EXPECT_LT(err(0.01), 1e-3);
  EXPECT_GT(halving_ratio(err, 0.02), 3.5);
}

TEST(FieldsFromPotential, GaugeShiftLeavesFieldsUnchanged) {
  // phi -> phi - (1/c) d_t psi, A -> A + grad psi with psi = sin(t + 2x) e^{0.3 z} + y.
  const double c = 1.5;
  const FourPotential base{[](const SpacetimePoint& p) { return std::sin(p[1]) * std::cos(p[0]); },
                           [](const SpacetimePoint& p) {
                             return Vec3d{p[2] * p[0], std::cos(p[3] + p[0]), p[1] * p[1]};
                           }};
  const auto psi_t = [](const SpacetimePoint& p) { return std::cos(p[0] + 2 * p[1]) * std::exp(0.3 * p[3]); };
  const auto grad_psi = [](const SpacetimePoint& p) {
    const double e = std::exp(0.3 * p[3]);
    return Vec3d{2 * std::cos(p[0] + 2 * p[1]) * e, 1.0, 0.3 * std::sin(p[0] + 2 * p[1]) * e};
  };
  const FourPotential shifted{[=](const SpacetimePoint& p) { return base.phi(p) - psi_t(p) / c; },
                              [=](const SpacetimePoint& p) { return base.a(p) + grad_psi(p); }};
  const auto gap = [&](double h) {
    const EmFieldSample a = fields_from_potential(base, kP, h, c);
    const EmFieldSample b = fields_from_potential(shifted, kP, h, c);
    return std::max(diff(a.e, b.e), diff(a.b, b.b));
  };
  EXPECT_LT(gap(0.01), 1e-4);
  EXPECT_GT(halving_ratio(gap, 0.02), 3.5);
}

TEST(LorenzGauge, Examples) {
  EXPECT_LT(std::abs(lorenz_gauge_residual(solutions::coulomb_potential(1.0, {0.5, 0.5, 0.5}), kP, 0.01)), 1e-12);

  const FourPotential linear{[](const SpacetimePoint& p) { return p[0]; },
                             [](const SpacetimePoint&) { return Vec3d{}; }};
  EXPECT_EQ(lorenz_gauge_residual(linear, {0, 0, 0, 0}, 0.01, 1.0), 1.0);
  EXPECT_NEAR(lorenz_gauge_residual(linear, kP, 0.01, 1.0), 1.0, 1e-13);
  EXPECT_NEAR(lorenz_gauge_residual(linear, kP, 0.01, 4.0), 0.25, 1e-15);
}

TEST(LorenzGauge, PlaneWavePotential) {
  // phi = f(k n.r - w t), A = n f: (1/c) d_t phi + div A = (k - w/c) f' = 0.
  const double c = 2.0, k = 1.3;
  const Vec3d n = Vec3d{1, 2, 2} / 3.0;
  const auto f = [=](const SpacetimePoint& p) {
    return std::sin(k * (n.x * p[1] + n.y * p[2] + n.z * p[3]) - c * k * p[0]);
  };
  const FourPotential pot{f, [=](const SpacetimePoint& p) { return n * f(p); }};
  const double r1 = std::abs(lorenz_gauge_residual(pot, kP, 0.02, c));
  const double r2 = std::abs(lorenz_gauge_residual(pot, kP, 0.01, c));
  EXPECT_LT(r1, 1e-3);
  EXPECT_GT(r1 / r2, 3.5);
}

TEST(DiracOfPotential, GivesGaugeAndFields) {
  // D Phi = -(gauge) eta0 - (B + iE).
  const double c = 1.7;
  const FourPotential pot{[](const SpacetimePoint& p) { return std::sin(p[1] - p[0]) + p[3] * p[2]; },
                          [](const SpacetimePoint& p) {
                            return Vec3d{p[2] * std::cos(p[0]), p[3] * p[1], std::exp(0.2 * p[1]) * p[0]};
                          }};
  const Steps h(1e-3);
  const BiQuaternion d = dirac_of_potential(pot, kP, h, c);
  const EmFieldSample s = fields_from_potential(pot, kP, h, c);
  EXPECT_LT(std::abs(d.s0 + lorenz_gauge_residual(pot, kP, h, c)), 1e-12);
  const Vec3c expect = -(to_complex(s.b) + to_complex(s.e) * complex(0, 1));
  EXPECT_LT(max_abs_c(d.vec() - expect), 1e-10);
}

// ---------------------------------------------------------------------------
// Tensor

TEST(EmTensor, Examples) {
  EXPECT_EQ(em_tensor({}).matrix(), Mat4c{});
  const Mat4c m = em_tensor({{0, 0, 0}, {1, 0, 0}}).matrix();
  EXPECT_EQ(m(0, 1), complex(1));
  EXPECT_EQ(m(1, 0), complex(-1));
  EXPECT_EQ(m(2, 3), complex(-1));
  EXPECT_EQ(m(3, 2), complex(1));
  EXPECT_EQ(m(0, 0), complex(0));
}

TEST(EmTensor, RoundTripsAndFirstRow) {
  Gen g(1);
  for (int i = 0; i < 100; ++i) {
    const EmFieldSample s{g.vec(), g.vec()};
    const EmTensor t = em_tensor(s);
    EXPECT_EQ(t.sample().e, s.e);
    EXPECT_EQ(t.sample().b, s.b);
    EXPECT_EQ(EmTensor::from_matrix(t.matrix()).f, t.f);
    const Mat4c m = t.matrix();
    EXPECT_EQ(m(0, 1), complex(s.b.x, -s.e.x));
    EXPECT_EQ(m(0, 2), complex(s.b.y, -s.e.y));
    EXPECT_EQ(m(0, 3), complex(s.b.z, -s.e.z));
    EXPECT_LT(max_abs_diff(transpose(m), m * complex(-1)), 1e-16);
  }
}

// ---------------------------------------------------------------------------
// Maxwell residuals

TEST(MaxwellResidual, ConstantFieldsAreExactlyZero) {
  const solutions::UniformField u{{0.3, -0.7, 0.2}, {0.5, 0.1, -0.4}};
  for (double h : {0.1, 0.01, 0.001}) {
    EXPECT_EQ(maxwell_residual(u, nullptr, kP, h).max_abs(), 0.0);
    EXPECT_EQ(max_abs_c(wave_residual(u, kP, h)), 0.0);
  }
}

TEST(MaxwellResidual, MatchesComponentwiseOracle) {
  Gen g(2);
  const EmFieldFn field = [](const SpacetimePoint& p) {
    return EmFieldSample{{std::sin(p[0] + p[1]), p[2] * p[3], std::cos(p[1] * p[3])},
                         {p[0] * p[1], std::exp(0.1 * p[2]), std::sin(p[3] - p[0])}};
  };
  for (int i = 0; i < 50; ++i) {
    const SpacetimePoint p{g.uniform(), g.uniform(), g.uniform(), g.uniform()};
    const double c = g.uniform(0.5, 3.0);
    const MaxwellResidual a = maxwell_residual(field, nullptr, p, 0.01, c);
    const MaxwellResidual b = direct_maxwell(field, p, 0.01, c);
    EXPECT_NEAR(a.gauss_b, b.gauss_b, 1e-12);
    EXPECT_NEAR(a.gauss_e, b.gauss_e, 1e-12);
    EXPECT_LT(diff(a.faraday, b.faraday), 1e-12);
    EXPECT_LT(diff(a.ampere, b.ampere), 1e-12);
  }
}

TEST(MaxwellResidual, SourcesEnterWithFourPi) {
  // Uniformly charged region E = (4 pi / 3) rho r and a uniform current
  // column B = (2 pi / c) j (-y, x, 0): both are linear, so exact.
  const double rho = 0.7, jz = 0.4, c = 2.0;
  const EmFieldFn field = [=](const SpacetimePoint& p) {
    return EmFieldSample{Vec3d{p[1], p[2], p[3]} * (4 * kPi / 3 * rho),
                         Vec3d{-p[2], p[1], 0.0} * (2 * kPi / c * jz)};
  };
  const SourceFn src = [=](const SpacetimePoint&) { return FourCurrent{rho, {0, 0, jz}}; };
  EXPECT_LT(maxwell_residual(field, src, kP, 0.01, c).max_abs(), 1e-12);
  EXPECT_GT(maxwell_residual(field, nullptr, kP, 0.01, c).max_abs(), 1.0);
}

TEST(MaxwellResidual, AxisPlaneWaveConvergesQuadratically) {
  // E = (E0 cos(kz - wt), 0, 0), B = (0, E0 cos(kz - wt), 0), w = ck.
  const double c = 2.0, k = 1.0;
  const EmFieldFn wave = [=](const SpacetimePoint& p) {
    const double v = std::cos(k * p[3] - c * k * p[0]);
    return EmFieldSample{{v, 0, 0}, {0, v, 0}};
  };
  const auto r = [&](double h) { return maxwell_residual(wave, nullptr, kP, h, c).max_abs(); };
  EXPECT_GT(halving_ratio(r, 0.02), 3.5);
  EXPECT_GT(halving_ratio(r, 0.01), 3.5);
  EXPECT_LT(r(0.005), 1e-4);
}

TEST(MaxwellResidual, ObliquePlaneWaveEachLawConverges) {
  const solutions::PlaneWave wave{Vec3d{1, 2, 2} / 3.0, Vec3d{2, -2, 1} / 3.0, 1.0, 1.0, 1.0};
  const auto law = [&](double h, int which) {
    const MaxwellResidual m = maxwell_residual(wave, nullptr, kP, h);
    switch (which) {
      case 0: return std::abs(m.gauss_b);
      case 1: return max_abs(m.faraday);
      case 2: return max_abs(m.ampere);
      default: return std::abs(m.gauss_e);
    }
  };
  for (int w = 0; w < 4; ++w) {
    const std::vector<double> h{0.02, 0.01, 0.005};
    const std::vector<double> r{law(0.02, w), law(0.01, w), law(0.005, w)};
    const Convergence cv = convergence(h, r);
    EXPECT_FALSE(cv.exact) << w;
    EXPECT_GE(cv.min_order, 1.8) << w;
  }
}

TEST(MaxwellResidual, OffCenterPointCharge) {
  const solutions::PointCharge q{1.0, {0.25, -0.4, 0.15}};
  const SpacetimePoint p{0.0, 0.9, 0.3, -0.5};
  const std::vector<double> h{0.02, 0.01, 0.005};
  std::vector<double> gauss_e, faraday;
  for (double s : h) {
    const MaxwellResidual m = maxwell_residual(q, nullptr, p, s);
    gauss_e.push_back(std::abs(m.gauss_e));
    faraday.push_back(max_abs(m.faraday));
    EXPECT_EQ(m.gauss_b, 0.0);
    EXPECT_EQ(max_abs(m.ampere), 0.0);
  }
  EXPECT_GE(convergence(h, gauss_e).min_order, 1.8);
  const Convergence cf = convergence(h, faraday);
  EXPECT_TRUE(cf.exact || cf.min_order >= 1.8);
}

TEST(WaveResidual, PlaneAndStandingWaves) {
  const solutions::PlaneWave plane{Vec3d{1, 2, 2} / 3.0, Vec3d{2, -2, 1} / 3.0, 1.0, 2.0, 1.5};
  const solutions::StandingWave standing{1.0, 1.2, 1.0};
  EXPECT_LT(max_abs_c(wave_residual(plane, kP, 0.01, 1.5)), 1e-3);
  EXPECT_LT(max_abs_c(wave_residual(standing, kP, 0.01, 1.0)), 1e-3);
  const auto rp = [&](double h) { return max_abs_c(wave_residual(plane, kP, h, 1.5)); };
  EXPECT_GT(halving_ratio(rp, 0.02), 3.5);
  const auto rs = [&](double h) { return max_abs_c(wave_residual(standing, kP, Steps({h, h * 0.7, h, h}), 1.0)); };
  EXPECT_GT(halving_ratio(rs, 0.02), 3.5);
}

TEST(WaveResidual, TransposeDiracSquaredIsWideStencilDAlembertian) {
  // D^T D with step h equals the three-point d'Alembertian with step 2h.
  const solutions::PlaneWave plane{Vec3d{1, 2, 2} / 3.0, Vec3d{2, -2, 1} / 3.0, 1.0, 2.0, 1.5};
  const EmFieldFn field = plane;
  const double h = 0.01, c = 1.5;
  const auto df = [&](const SpacetimePoint& q) { return dirac(tensor_quaternion(field), q, h, c); };
  const BiQuaternion dtd = dirac_transpose(df, kP, h, c);
  const Vec3c wide = wave_residual(field, kP, 2 * h, c);
  EXPECT_LT(std::abs(dtd.s0), 1e-9);
  EXPECT_LT(max_abs_c(dtd.vec() + wide), 1e-9);
}

TEST(ContinuityResidual, StaticAndAdvectedCharge) {
  const SourceFn stat = [](const SpacetimePoint& p) { return FourCurrent{std::exp(-p[1] * p[1]), {}}; };
  EXPECT_EQ(continuity_residual(stat, kP, 0.01), 0.0);

  const SourceFn blob = solutions::AdvectedGaussian{1.0, 0.8, {0.1, 0.2, -0.3}, {0.3, -0.2, 0.5}};
  const auto r = [&](double h) { return std::abs(continuity_residual(blob, kP, h)); };
  EXPECT_LT(r(0.01), 1e-4);
  EXPECT_GT(halving_ratio(r, 0.02), 3.5);
}

TEST(Steps, RejectDegenerate) {
  try {
    (void)maxwell_residual(solutions::UniformField{}, nullptr, kP, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateStep);
  }
  EXPECT_THROW((void)wave_residual(solutions::UniformField{}, kP, -0.1), Error);
  EXPECT_THROW((void)maxwell_residual(solutions::UniformField{}, nullptr, kP, 0.1, 0.0), Error);
}

// ---------------------------------------------------------------------------
// Quadratic forms

TEST(EnergyQuadratic, Examples) {
  const EnergyForm z = energy_quadratic({});
  EXPECT_EQ(z.w0, 0.0);
  EXPECT_EQ(z.flux, Vec3d{});
  const EnergyForm w = energy_quadratic({{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(w.w0, 1.0);
  EXPECT_EQ(w.flux, Vec3d(0, 0, 1));
}

TEST(EnergyQuadratic, MatrixIdentity) {
  // (1/2) F conj(F) = -W0 eta0 + i W.eta
  Gen g(3);
  for (int i = 0; i < 100; ++i) {
    const EmFieldSample s{g.vec(), g.vec()};
    const Mat4c f = em_tensor(s).matrix();
    const Mat4c lhs = f * conj(f) * complex(0.5);
    const EnergyForm w = energy_quadratic(s);
    const Mat4c rhs = to_eta(BiQuaternion(complex(-w.w0), to_complex(w.flux) * complex(0, 1)));
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-14);
  }
}

TEST(LorentzInvariants, ExamplesAndMatrixIdentity) {
  const FieldInvariants pw = lorentz_invariants({{1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(pw.i1, 0.0);
  EXPECT_EQ(pw.i2, 0.0);
  const FieldInvariants b = lorentz_invariants({{0, 0, 0}, {0, 0, 1}});
  EXPECT_EQ(b.i1, 0.5);
  EXPECT_EQ(b.i2, 0.0);

  // (1/2) F^T F = (I1 - i I2) eta0
  Gen g(4);
  for (int i = 0; i < 100; ++i) {
    const EmFieldSample s{g.vec(), g.vec()};
    const Mat4c f = em_tensor(s).matrix();
    const FieldInvariants inv = lorentz_invariants(s);
    const Mat4c rhs = Mat4c::identity() * complex(inv.i1, -inv.i2);
    EXPECT_LT(max_abs_diff(transpose(f) * f * complex(0.5), rhs), 1e-14);
  }
}

// ---------------------------------------------------------------------------
// Grids and convergence helper

TEST(GridSpec, PointOrderAndValidation) {
  GridSpec g;
  g.origin = {0, 1, 2, 3};
  g.spacing = {0.5, 1, 1, 0.25};
  g.dims = {2, 1, 3, 4};
  EXPECT_EQ(g.size(), 24u);
  EXPECT_EQ(g.point(0), (SpacetimePoint{0, 1, 2, 3}));
  EXPECT_EQ(g.point(1), (SpacetimePoint{0, 1, 2, 3.25}));
  EXPECT_EQ(g.point(4), (SpacetimePoint{0, 1, 3, 3}));
  EXPECT_EQ(g.point(12), (SpacetimePoint{0.5, 1, 2, 3}));
  g.dims[2] = 0;
  EXPECT_THROW(g.validate(), Error);
}

TEST(GridSpec, MaxOverGridIsThreadIndependent) {
  GridSpec g;
  g.origin = {0, -1, -1, -1};
  g.spacing = {0.2, 0.4, 0.4, 0.4};
  g.dims = {3, 6, 6, 6};
  const solutions::PlaneWave wave{Vec3d{1, 2, 2} / 3.0, Vec3d{2, -2, 1} / 3.0, 1.0, 1.0, 1.0};
  const auto fn = [&](const SpacetimePoint& p) { return maxwell_residual(wave, nullptr, p, 0.01).max_abs(); };
  const double a = max_over_grid(g, fn, 1);
  const double b = max_over_grid(g, fn, 4);
  EXPECT_EQ(a, b);
  EXPECT_GT(a, 0.0);
}

TEST(ConvergenceHelper, ExactAndOrders) {
  EXPECT_TRUE(convergence({0.1, 0.05}, {0.0, 1e-15}).exact);
  const Convergence c = convergence({0.1, 0.05, 0.025}, {4e-2, 1e-2, 2.5e-3});
  EXPECT_FALSE(c.exact);
  EXPECT_NEAR(c.min_ratio, 4.0, 1e-12);
  EXPECT_NEAR(c.min_order, 2.0, 1e-12);
  EXPECT_THROW((void)convergence({0.1}, {0.1}), Error);
}
