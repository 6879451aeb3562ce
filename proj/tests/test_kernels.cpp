#include <gtest/gtest.h>
#include <omp.h>

#include <vector>

#include "fraclab/kernels.hpp"
#include "fraclab/spectral.hpp"
#include "test_support.hpp"

namespace fraclab {
namespace {

namespace ser = kernels::serial;
namespace par = kernels::parallel;
using testing::random_field;

// Sizes straddling the reduction block.
class KernelSizes : public ::testing::TestWithParam<int> {};

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Field random_of_size(int n, std::uint64_t seed) {
  // A 1-D grid of n points carries exactly n samples.
  return random_field(Grid(1, n, 1.0), seed);
}

TEST_P(KernelSizes, PointwiseKernelsAreBitIdentical) {
  const int n = GetParam();
  const Field a = random_of_size(n, 1);
  const Field b = random_of_size(n, 2);
  const auto w = random_real(n, 3);

  std::vector<double> r1(n), r2(n);
  ser::abs2(a.values(), r1);
  par::abs2(a.values(), r2);
  EXPECT_EQ(r1, r2);

  Field s1 = a, s2 = a;
  ser::scale(s1.values(), std::span<const double>(w));
  par::scale(s2.values(), std::span<const double>(w));
  EXPECT_EQ(s1, s2);

  s1 = a, s2 = a;
  ser::scale(s1.values(), b.values());
  par::scale(s2.values(), b.values());
  EXPECT_EQ(s1, s2);

  Field m1(a.grid()), m2(a.grid());
  ser::multiply(a.values(), w, m1.values());
  par::multiply(a.values(), w, m2.values());
  EXPECT_EQ(m1, m2);

  s1 = a, s2 = a;
  ser::phase_rotate(s1.values(), w, 0.3);
  par::phase_rotate(s2.values(), w, 0.3);
  EXPECT_EQ(s1, s2);

  s1 = a, s2 = a;
  ser::axpy(cplx(0.5, -2.0), b.values(), s1.values());
  par::axpy(cplx(0.5, -2.0), b.values(), s2.values());
  EXPECT_EQ(s1, s2);
}

TEST_P(KernelSizes, ReductionsAgreeToRoundoff) {
  const int n = GetParam();
  const Field a = random_of_size(n, 4);
  const Field b = random_of_size(n, 5);
  const auto x = random_real(n, 6);
  auto w = random_real(n, 7);
  for (auto& v : w) v = std::abs(v);

  const double tol = 1e-13;
  EXPECT_NEAR(ser::sum(x), par::sum(x), tol * n);
  EXPECT_NEAR(ser::dot_real(x, w), par::dot_real(x, w), tol * n);
  EXPECT_NEAR(ser::weighted_norm2(a.values(), w), par::weighted_norm2(a.values(), w), tol * n);
  const cplx i1 = ser::inner(a.values(), b.values());
  const cplx i2 = par::inner(a.values(), b.values());
  EXPECT_NEAR(std::abs(i1 - i2), 0.0, tol * n);
  EXPECT_EQ(ser::max_abs_diff(a.values(), b.values()), par::max_abs_diff(a.values(), b.values()));
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelSizes, ::testing::Values(8, 1024, 4096, 65536));

TEST(Kernels, ReductionsDoNotDependOnThreadCount) {
  const Field a = random_of_size(1 << 15, 8);
  const auto x = random_real(1 << 15, 9);
  const int saved = omp_get_max_threads();
  std::vector<double> sums;
  std::vector<cplx> inners;
  for (int t : {1, 2, 3, 7}) {
    omp_set_num_threads(t);
    sums.push_back(par::sum(x));
    inners.push_back(par::inner(a.values(), a.values()));
  }
  omp_set_num_threads(saved);
  for (std::size_t i = 1; i < sums.size(); ++i) {
    EXPECT_EQ(sums[i], sums[0]);
    EXPECT_EQ(inners[i], inners[0]);
  }
}

TEST(Kernels, PairSumSerialAndParallelAgree) {
  const Grid g(2, 16, 6.0);
  const HartreeKernel K(g, 0.5);
  const auto rho = random_real(g.size(), 10);
  const kernels::DisplacementTable table{&g, K.samples()};
  const double s = ser::pair_sum(rho, table);
  const double p = par::pair_sum(rho, table);
  EXPECT_NEAR(s, p, 1e-12 * std::abs(s));
}

TEST(Kernels, DisplacementIndexFoldsPeriodically) {
  const Grid g(2, 8, 1.0);
  // (1, 2) - (3, 7) = (-2, -5) = (6, 3) mod 8
  EXPECT_EQ(kernels::displacement_index(g, g.flatten({1, 2, 0}), g.flatten({3, 7, 0})),
            g.flatten({6, 3, 0}));
  EXPECT_EQ(kernels::displacement_index(g, 5, 5), 0u);
}

TEST(Kernels, SizeMismatchIsRejected) {
  std::vector<cplx> a(4);
  std::vector<double> b(5);
  EXPECT_THROW(par::abs2(a, b), InvalidInput);
  EXPECT_THROW(ser::abs2(a, b), InvalidInput);
}

}  // namespace
}  // namespace fraclab
