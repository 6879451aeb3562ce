#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraclab/spectral.hpp"
#include "test_support.hpp"

using namespace fraclab;
using namespace fraclab::testing;

namespace {

const PhysicsParams kRef{0.6, 0.5, 2};

}  // namespace

TEST(Grid, Validation) {
  EXPECT_THROW(Grid(2, 6, 1.0), InvalidInput);
  EXPECT_THROW(Grid(2, 24, 1.0), InvalidInput);
  EXPECT_THROW(Grid(4, 8, 1.0), InvalidInput);
  EXPECT_THROW(Grid(2, 8, 0.0), InvalidInput);
  Grid g(3, 8, 2.0);
  EXPECT_EQ(g.size(), 512u);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.25 * 0.25 * 0.25);
  int zeros = 0;
  for (double k2 : g.wavenumber_squared()) zeros += (k2 == 0.0);
  EXPECT_EQ(zeros, 1);
}

TEST(PhysicsParams, Constraints) {
  EXPECT_NO_THROW(kRef.validate());
  EXPECT_THROW((PhysicsParams{1.0, 0.5, 2}.validate()), InvalidInput);
  EXPECT_THROW((PhysicsParams{0.6, 1.2, 2}.validate()), InvalidInput);
  EXPECT_THROW((PhysicsParams{0.9, 1.5, 1}.validate()), InvalidInput);
  try {
    PhysicsParams{0.5, 1.0, 2}.validate();
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("gamma < 2*alpha"), std::string::npos);
  }
  EXPECT_THROW(kRef.validate_against(Grid(1, 16, 1.0)), InvalidInput);
}

TEST(FracLaplacian, PlaneWaveEigenfunction) {
  Grid g(2, 32, 7.0);
  FractionalLaplacian op(g, kRef.alpha);
  for (std::array<int, 3> m : {std::array<int, 3>{1, 0, 0}, {3, -5, 0}, {-16, 7, 0}}) {
    Field u = plane_wave(g, m);
    Field Au = op.apply(u);
    const double lam = std::pow(plane_wave_k2(g, m), kRef.alpha);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(std::abs(Au[i] - lam * u[i]), 0.0, 1e-12 * (1.0 + lam));
    }
  }
}

TEST(FracLaplacian, ConstantIsAnnihilated) {
  Grid g(2, 16, 3.0);
  Field c(g, std::vector<cplx>(g.size(), cplx(2.5, -1.0)));
  Field Ac = frac_laplacian(c, kRef);
  for (const auto& z : Ac.values()) EXPECT_LT(std::abs(z), 1e-13);
}

TEST(FracLaplacian, AlphaOneMatchesSecondDerivativeOracle) {
  Grid g(2, 32, 2.0 * std::numbers::pi);
  Field u = random_band_limited(g, 7, 5);
  Field fast = FractionalLaplacian(g, 1.0).apply(u);
  Field oracle = spectral_neg_laplacian_oracle(u);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    num += std::norm(fast[i] - oracle[i]);
    den += std::norm(oracle[i]);
  }
  EXPECT_LT(std::sqrt(num / den), 1e-12);
}

TEST(FracLaplacian, DimensionMismatch) {
  Grid g(1, 16, 3.0);
  Field u(g);
  EXPECT_THROW(frac_laplacian(u, kRef), InvalidInput);
}

TEST(FracLaplacian, SelfAdjoint) {
  Grid g(2, 32, 10.0);
  FractionalLaplacian op(g, kRef.alpha);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Field u = random_field(g, 100 + s), v = random_field(g, 200 + s);
    const cplx a = brute_inner(op.apply(u), v);
    const cplx b = brute_inner(u, op.apply(v));
    EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-12);
  }
}

TEST(FracLaplacian, Linear) {
  Grid g(2, 16, 5.0);
  FractionalLaplacian op(g, kRef.alpha);
  Field u = random_field(g, 1), v = random_field(g, 2);
  const cplx a(0.3, -1.7);
  Field lhs = op.apply(u + a * v);
  Field rhs = op.apply(u) + a * op.apply(v);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(lhs[i] - rhs[i]), 1e-12);
}

TEST(Mass, ConstantsAndZero) {
  Grid g(2, 16, 3.0);
  EXPECT_EQ(mass(Field(g)), 0.0);
  Field c(g, std::vector<cplx>(g.size(), cplx(0.0, 2.0)));
  EXPECT_NEAR(mass(c), 4.0 * 9.0, 1e-12);
}

TEST(Mass, GaussianMatchesAnalyticIntegral) {
  // int_{R^2} exp(-2|x|^2) dx = pi / 2.
  Grid g(2, 128, 20.0);
  Field u(g);
  for (std::size_t f = 0; f < g.size(); ++f) {
    auto idx = g.unflatten(f);
    const double x = g.coordinate(idx[0]), y = g.coordinate(idx[1]);
    u[f] = std::exp(-(x * x + y * y));
  }
  EXPECT_LT(rel_err(mass(u), std::numbers::pi / 2.0), 1e-10);
}

TEST(Mass, ParsevalConsistency) {
  Grid g(3, 16, 4.0);
  Fft fft(g);
  for (std::uint64_t s = 0; s < 3; ++s) {
    Field u = random_field(g, s);
    EXPECT_LT(rel_err(fourier_mass(u, fft), mass(u)), 1e-12);
  }
}

TEST(HartreeKernel, SamplesPositiveEvenAndCached) {
  Grid g(2, 16, 4.0);
  HartreeKernel K(g, 0.5);
  const int n = g.points_per_axis();
  for (std::size_t f = 0; f < g.size(); ++f) {
    EXPECT_GT(K.samples()[f], 0.0);
    auto idx = g.unflatten(f);
    std::size_t mirror = g.flatten({n - idx[0], n - idx[1], 0});
    EXPECT_EQ(K.samples()[f], K.samples()[mirror]);
  }
  // Origin value is the cell average, which exceeds the nearest-neighbour sample.
  EXPECT_GT(K.origin_value(), K.samples()[1]);
  // Spectrum of an even kernel: the discarded imaginary part is roundoff.
  std::vector<cplx> s(K.samples().begin(), K.samples().end()), hat(g.size());
  Fft(g).forward(s, hat);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(hat[i].imag(), 0.0, 1e-12 * std::abs(hat[0]));
    EXPECT_EQ(K.spectrum()[i], hat[i].real());
  }
}

TEST(HartreeKernel, OriginCellAverage) {
  // In 1D the cell average of |x|^{-gamma} has the closed form
  // (h/2)^{-gamma} / (1 - gamma); the 32-point midpoint sum approaches it
  // from below.
  Grid g(1, 16, 4.0);
  HartreeKernel K(g, 0.5);
  const double exact = std::pow(0.125, -0.5) / 0.5;
  EXPECT_LT(K.origin_value(), exact);
  EXPECT_GT(K.origin_value(), 0.9 * exact);
}

TEST(Hartree, ZeroField) {
  Grid g(2, 16, 4.0);
  HartreeKernel K(g, 0.5);
  EXPECT_EQ(hartree_quadratic(Field(g), K), 0.0);
  EXPECT_EQ(hartree_direct(Field(g), K), 0.0);
}

TEST(Hartree, SinglePoint) {
  Grid g(2, 16, 4.0);
  HartreeKernel K(g, 0.5);
  Field u(g);
  u[37] = cplx(3.0, 4.0);
  const double q = 25.0 * g.cell_volume();
  EXPECT_LT(rel_err(hartree_direct(u, K), q * q * K.origin_value()), 1e-15);
  EXPECT_LT(rel_err(hartree_quadratic(u, K), q * q * K.origin_value()), 1e-10);
}

TEST(Hartree, TwoPointHandSum) {
  Grid g(2, 16, 4.0);
  HartreeKernel K(g, 0.5);
  Field u(g);
  const std::size_t a = g.flatten({2, 3, 0}), b = g.flatten({11, 6, 0});
  u[a] = 2.0;
  u[b] = cplx(0.0, 1.5);
  const double cv = g.cell_volume();
  const double qa = 4.0 * cv, qb = 2.25 * cv;
  // Displacement (9, 3) folds to the minimum image (7, 3).
  const double r = std::hypot(7 * g.spacing(), 3 * g.spacing());
  const double expect =
      2.0 * qa * qb * std::pow(r, -0.5) + (qa * qa + qb * qb) * K.origin_value();
  EXPECT_LT(rel_err(hartree_direct(u, K), expect), 1e-14);
  EXPECT_LT(rel_err(hartree_quadratic(u, K), expect), 1e-10);
}

TEST(Hartree, OracleEquivalenceRandomFields) {
  int trial = 0;
  for (int n : {16, 32}) {
    Grid g(2, n, 6.0);
    HartreeKernel K(g, 0.5);
    for (int s = 0; s < 10; ++s, ++trial) {
      Field u = random_field(g, 1000 + trial);
      EXPECT_LT(rel_err(hartree_quadratic(u, K), hartree_direct(u, K)), 1e-10);
    }
  }
}

TEST(Hartree, DirectGuard) {
  Grid g(2, 128, 6.0);
  HartreeKernel K(g, 0.5);
  EXPECT_THROW(hartree_direct(Field(g), K), InvalidInput);
  Grid small(2, 64, 6.0);
  EXPECT_NO_THROW(hartree_direct(Field(small), HartreeKernel(small, 0.5)));
}

TEST(Hartree, KernelGridMismatch) {
  Grid g(2, 16, 4.0), h(2, 16, 5.0);
  HartreeKernel K(g, 0.5);
  EXPECT_THROW(hartree_quadratic(Field(h), K), InvalidInput);
}

TEST(Energy, ZeroField) {
  Grid g(2, 16, 4.0);
  Model m(g, kRef);
  EXPECT_EQ(energy(Field(g), m), 0.0);
  Field G = energy_gradient(Field(g), m);
  for (const auto& z : G.values()) EXPECT_EQ(z, cplx(0.0));
}

TEST(Energy, PlaneWaveByHand) {
  Grid g(2, 32, 8.0);
  Model m(g, kRef);
  const std::array<int, 3> mode{2, -1, 0};
  Field u = plane_wave(g, mode);
  const double Ld = 64.0;
  const auto parts = energy_parts(u, m);
  const double kin = std::pow(plane_wave_k2(g, mode), kRef.alpha) * Ld;
  EXPECT_LT(rel_err(parts.kinetic, kin), 1e-12);
  // |u|^2 = 1: the double sum is L^d times the kernel's box integral.
  const double H = hartree_direct(u, m.kernel());
  EXPECT_LT(rel_err(H, Ld * m.kernel().total_integral()), 1e-12);
  EXPECT_LT(rel_err(energy(u, m), 0.5 * kin - 0.25 * H), 1e-11);
}

TEST(Energy, RescaledFamilyScalingLaws) {
  // u_lambda(x) = lambda^{1/2} u(lambda^{1/d} x) sampled on the box of side
  // L lambda^{-1/d}: same sample array scaled by lambda^{1/2}.
  const int n = 64;
  const double L = 20.0;
  const PhysicsParams p = kRef;
  Grid g(2, n, L);
  Field u = gaussian_bump(g, {0.3, -0.2, 0.0}, 2.0);
  Model m(g, p);
  const auto base = energy_parts(u, m);
  for (double lam : {0.25, 0.5, 2.0, 3.0}) {
    Grid gl(2, n, L * std::pow(lam, -0.5));
    Field ul(gl, std::vector<cplx>(u.values().begin(), u.values().end()));
    ul *= std::sqrt(lam);
    Model ml(gl, p);
    EXPECT_LT(rel_err(mass(ul), mass(u)), 1e-12);
    const auto parts = energy_parts(ul, ml);
    EXPECT_LT(rel_err(parts.kinetic, std::pow(lam, 2 * p.alpha / 2) * base.kinetic), 1e-3);
    EXPECT_LT(rel_err(parts.interaction, std::pow(lam, p.gamma / 2) * base.interaction), 1e-3);
  }
}

TEST(Energy, PhaseAndShiftInvariance) {
  Grid g(2, 32, 10.0);
  Model m(g, kRef);
  Field u = random_band_limited(g, 3, 4);
  const double e = energy(u, m), q = mass(u);
  Field ur = std::polar(1.0, 1.234) * u;
  EXPECT_LT(rel_err(energy(ur, m), e), 1e-13);
  EXPECT_LT(rel_err(mass(ur), q), 1e-14);
  Field us = u.shifted({5, -9, 0});
  EXPECT_LT(rel_err(energy(us, m), e), 1e-13);
  EXPECT_LT(rel_err(mass(us), q), 1e-14);
}

TEST(EnergyGradient, CentralDifferenceDirectionalDerivative) {
  Grid g(2, 32, 12.0);
  Model m(g, kRef);
  const double eps = 1e-5;
  for (std::uint64_t s = 0; s < 5; ++s) {
    Field u = random_band_limited(g, 10 + s, 4);
    Field v = random_band_limited(g, 20 + s, 6);
    const double fd = (energy(u + eps * v, m) - energy(u - eps * v, m)) / (2.0 * eps);
    const double an = brute_inner(energy_gradient(u, m), v).real();
    EXPECT_LT(std::abs(fd - an) / std::abs(an), 1e-6) << "pair " << s;
  }
}

TEST(HAlphaNorm, ZeroConstantPlaneWave) {
  Grid g(2, 16, 3.0);
  FractionalLaplacian op(g, kRef.alpha);
  EXPECT_EQ(h_alpha_norm(Field(g), op), 0.0);
  Field c(g, std::vector<cplx>(g.size(), cplx(-2.0, 0.0)));
  EXPECT_LT(rel_err(h_alpha_norm(c, op), 2.0 * 3.0), 1e-13);
  const std::array<int, 3> mode{1, 3, 0};
  Field w = plane_wave(g, mode);
  const double expect = std::sqrt((1.0 + std::pow(plane_wave_k2(g, mode), kRef.alpha)) * 9.0);
  EXPECT_LT(rel_err(h_alpha_norm(w, op), expect), 1e-12);
}

TEST(Hardy, PlaneWaveAndTranslation) {
  Grid g(2, 32, 8.0);
  FractionalLaplacian op(g, kRef.alpha);
  HartreeKernel K(g, kRef.gamma);
  const std::array<int, 3> mode{0, 2, 0};
  Field w = plane_wave(g, mode);
  const double expect = K.total_integral() /
                        ((1.0 + std::pow(plane_wave_k2(g, mode), kRef.alpha)) * 64.0);
  EXPECT_LT(rel_err(hardy_sup_ratio(w, K, op), expect), 1e-12);

  Field u = random_band_limited(g, 99, 3);
  EXPECT_LT(rel_err(hardy_sup_ratio(u.shifted({3, 7, 0}), K, op), hardy_sup_ratio(u, K, op)),
            1e-13);
  EXPECT_THROW(hardy_sup_ratio(Field(g), K, op), InvalidInput);
}

TEST(Hardy, RatioBoundedUnderRefinement) {
  auto sweep_max = [](int n) {
    Grid g(2, n, 16.0);
    FractionalLaplacian op(g, kRef.alpha);
    HartreeKernel K(g, kRef.gamma);
    double mx = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      mx = std::max(mx, hardy_sup_ratio(random_band_limited(g, 500 + s, 3), K, op));
    }
    return mx;
  };
  const double m64 = sweep_max(64);
  const double m128 = sweep_max(128);
  EXPECT_TRUE(std::isfinite(m64));
  EXPECT_LT(std::abs(m128 - m64) / m64, 0.10) << m64 << " vs " << m128;
}
