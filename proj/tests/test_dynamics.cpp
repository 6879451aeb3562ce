#include <gtest/gtest.h>

#include <fstream>
#include <numbers>

#include "fraclab/dynamics.hpp"
#include "fraclab/groundstate.hpp"
#include "test_support.hpp"

namespace fraclab {
namespace {

using testing::plane_wave;
using testing::plane_wave_k2;
using testing::random_band_limited;

const PhysicsParams kParams{0.6, 0.5, 2};

Field gaussian_start(const Grid& g, double q, double width) {
  SolveOptions o;
  o.q = q;
  o.init = GaussianInit{width, {0, 0, 0}, 0.0};
  return make_initial_guess(g, o);
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field conj(const Field& u) {
  Field c(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) c[i] = std::conj(u[i]);
  return c;
}

TEST(Step, FreePlaneWaveRotatesByTheExactPhase) {
  const Grid g(2, 32, 10.0);
  const Model free(g, kParams, HartreeKernel::zero(g));
  const std::array<int, 3> m{3, -2, 0};
  const Field u0 = plane_wave(g, m);
  const double w = std::pow(plane_wave_k2(g, m), kParams.alpha);
  const double dt = 0.01;
  for (auto conv : {TimeConvention::kAsPrinted, TimeConvention::kStandard}) {
    const double sign = conv == TimeConvention::kAsPrinted ? 1.0 : -1.0;
    const SplitStepper stepper(free, dt, conv);
    Field u = u0;
    for (int s = 0; s < 200; ++s) stepper.advance(u);
    const Field expect = std::polar(1.0, sign * w * 200 * dt) * u0;
    EXPECT_LT(max_diff(u, expect), 1e-11);
  }
}

TEST(Step, ConservesMassOfRandomFields) {
  const Grid g(2, 32, 12.0);
  const Model m(g, kParams);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Field u = testing::random_field(g, seed);
    const Field v = step(u, 0.05, m);
    EXPECT_NEAR(mass(v), mass(u), 1e-12 * mass(u));
  }
}

TEST(Step, RejectsBadInput) {
  const Grid g(2, 16, 8.0);
  const Model m(g, kParams);
  Field u = random_band_limited(g, 1);
  EXPECT_THROW(step(u, 0.0, m), InvalidInput);
  EXPECT_THROW(step(u, -1e-3, m), InvalidInput);
  EXPECT_THROW(step(Field(Grid(2, 32, 8.0)), 1e-3, m), InvalidInput);
  u[7] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(step(u, 1e-3, m), NumericalAbort);
}

TEST(Evolve, RecordsTenStepsPlusTheInitialTime) {
  const Grid g(2, 16, 8.0);
  const Model m(g, kParams);
  const double dt = 1e-2;
  EvolveOptions eo;
  eo.keep_fields = true;
  const auto tr = evolve(gaussian_start(g, 1.0, 1.0), 10 * dt, dt, m, eo);
  ASSERT_EQ(tr.times.size(), 11u);
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.times.back(), 10 * dt);
  EXPECT_EQ(tr.steps, 10);
  EXPECT_EQ(tr.mass_series.size(), 11u);
  EXPECT_EQ(tr.energy_series.size(), 11u);
  EXPECT_EQ(tr.snapshots.size(), 11u);
  EXPECT_TRUE(tr.orbit_distance.empty());
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
  EXPECT_EQ(*tr.final_state, tr.snapshots.back());
}

TEST(Evolve, ShortensTheLastStepToLandOnT) {
  const Grid g(2, 16, 8.0);
  const Model m(g, kParams);
  EvolveOptions eo;
  eo.snapshot_stride = 4;
  const auto tr = evolve(gaussian_start(g, 1.0, 1.0), 0.105, 0.01, m, eo);
  EXPECT_EQ(tr.steps, 11);
  EXPECT_EQ(tr.times.back(), 0.105);
  // 0, 0.04, 0.08, T
  EXPECT_EQ(tr.times.size(), 4u);

  // The shortened step is an honest step of length T - 10 dt.
  Field manual = gaussian_start(g, 1.0, 1.0);
  const SplitStepper full(m, 0.01);
  for (int s = 0; s < 10; ++s) full.advance(manual);
  SplitStepper(m, 0.105 - 10 * 0.01).advance(manual);
  EXPECT_LT(max_diff(manual, *tr.final_state), 1e-14);
}

TEST(Evolve, RejectsBadArguments) {
  const Grid g(2, 16, 8.0);
  const Model m(g, kParams);
  const Field u = gaussian_start(g, 1.0, 1.0);
  EXPECT_THROW(evolve(u, 0.0, 1e-3, m), InvalidInput);
  EXPECT_THROW(evolve(u, 1.0, 0.0, m), InvalidInput);
  EvolveOptions eo;
  eo.snapshot_stride = 0;
  EXPECT_THROW(evolve(u, 1.0, 1e-2, m, eo), InvalidInput);
}

TEST(Conservation, SingleSnapshotHasNoDrift) {
  Trajectory tr;
  tr.times = {0.0};
  tr.mass_series = {2.0};
  tr.energy_series = {-1.0};
  const auto r = conservation_report(tr);
  EXPECT_EQ(r.mass_drift, 0.0);
  EXPECT_EQ(r.energy_drift, 0.0);
  EXPECT_THROW(conservation_report(Trajectory{}), InvalidInput);
}

TEST(Conservation, MassOverTenThousandSteps) {
  const Grid g(2, 32, 20.0);
  const Model m(g, kParams);
  EvolveOptions eo;
  eo.snapshot_stride = 500;
  const auto tr = evolve(gaussian_start(g, 2.0, 1.5), 10.0, 1e-3, m, eo);
  EXPECT_EQ(tr.steps, 10000);
  EXPECT_LT(conservation_report(tr).mass_drift, 1e-10);
}

TEST(Conservation, EnergyDriftIsSecondOrderInDt) {
  const Grid g(2, 64, 40.0);
  const Model m(g, kParams);
  const Field u0 = gaussian_start(g, 2.0, 5.0);
  EvolveOptions eo;
  eo.snapshot_stride = 10;
  const double coarse = conservation_report(evolve(u0, 4.0, 1e-2, m, eo)).energy_drift;
  eo.snapshot_stride = 20;
  const double fine = conservation_report(evolve(u0, 4.0, 5e-3, m, eo)).energy_drift;
  const double factor = coarse / fine;
  EXPECT_GE(factor, 3.0);
  EXPECT_LE(factor, 5.0);
}

TEST(Evolve, ConjugationReversesTime) {
  const Grid g(2, 32, 20.0);
  const Model m(g, kParams);
  const Field u0 = gaussian_start(g, 2.0, 1.5) + 0.1 * random_band_limited(g, 3, 3);
  EvolveOptions eo;
  eo.snapshot_stride = 1000;
  const auto fwd = evolve(u0, 1.0, 1e-3, m, eo);
  const auto back = evolve(conj(*fwd.final_state), 1.0, 1e-3, m, eo);
  EXPECT_LT(max_diff(conj(*back.final_state), u0), 1e-6);
}

TEST(Evolve, CommutesWithGlobalPhaseAndLatticeShifts) {
  const Grid g(2, 32, 20.0);
  const Model m(g, kParams);
  const Field u0 = gaussian_start(g, 2.0, 1.5) + 0.2 * random_band_limited(g, 4, 3);
  EvolveOptions eo;
  eo.snapshot_stride = 1000;
  const Field base = *evolve(u0, 0.5, 1e-2, m, eo).final_state;

  const cplx rot = std::polar(1.0, 0.8);
  const Field phased = *evolve(rot * u0, 0.5, 1e-2, m, eo).final_state;
  EXPECT_LT(max_diff(phased, rot * base), 1e-12);

  const std::array<int, 3> y{5, -3, 0};
  const Field moved = *evolve(u0.shifted(y), 0.5, 1e-2, m, eo).final_state;
  EXPECT_LT(max_diff(moved, base.shifted(y)), 1e-12);
}

TEST(Evolve, GroundStateRotatesAsAStandingWave) {
  const Grid g(2, 64, 40.0);
  const Model m(g, kParams);
  SolveOptions o;
  o.q = 2.0;
  const GroundState gs = minimize(m, o);
  ASSERT_TRUE(gs.converged);
  EvolveOptions eo;
  eo.snapshot_stride = 100;
  eo.orbit_reference = &gs.g;
  const double T = 2.0;
  const auto tr = evolve(gs.g, T, 1e-3, m, eo);
  const double norm = h_alpha_norm(gs.g, m.laplacian());
  for (double d : tr.orbit_distance) EXPECT_LT(d, 1e-3 * norm);
  // psi(t) = e^{i omega t} g for the equation as printed.
  const cplx overlap = inner(gs.g, *tr.final_state);
  EXPECT_NEAR(std::remainder(std::arg(overlap) - gs.omega * T, 2.0 * std::numbers::pi), 0.0, 1e-6);
}

TEST(TrajectoryCsv, HeaderAndRowCount) {
  const Grid g(2, 16, 8.0);
  const Model m(g, kParams);
  const Field u = gaussian_start(g, 1.0, 1.0);
  EvolveOptions eo;
  eo.orbit_reference = &u;
  const auto tr = evolve(u, 0.05, 0.01, m, eo);
  const auto path = std::filesystem::temp_directory_path() / "fraclab-traj-test" / "t.csv";
  write_trajectory_csv(path, tr);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,mass,energy,orbitDistance");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(tr.times.size()));
  std::filesystem::remove_all(path.parent_path());
}

}  // namespace
}  // namespace fraclab
