#pragma once

// Data-parallel inner loops.
//
// Every kernel exists twice: `serial` is the straightforward reference loop,
// `parallel` is the OpenMP version used by the library. Pointwise kernels are
// bit-identical between the two. Reductions in `parallel` accumulate fixed
// blocks of kReductionBlock elements and then add the block sums in order, so
// their result does not depend on the thread count; they agree with `serial`
// to reordering roundoff only.

#include <cstddef>
#include <span>

#include "fraclab/grid.hpp"

namespace fraclab::kernels {

inline constexpr std::size_t kReductionBlock = 1024;

/// Callable returning the kernel value for a flat displacement index.
struct DisplacementTable {
  const Grid* grid;
  std::span<const double> values;  // indexed by flat min-image displacement
};

namespace serial {

void abs2(std::span<const cplx> u, std::span<double> out);
void scale(std::span<cplx> u, std::span<const double> w);
void scale(std::span<cplx> u, std::span<const cplx> w);
void multiply(std::span<const cplx> a, std::span<const double> w,
              std::span<cplx> out);
void phase_rotate(std::span<cplx> u, std::span<const double> potential,
                  double dt);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

double sum(std::span<const double> x);
double weighted_norm2(std::span<const cplx> u, std::span<const double> w);
double dot_real(std::span<const double> a, std::span<const double> b);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

/// sum_j sum_l rho_j rho_l K(x_j - x_l), the O(N^2) pair sum.
double pair_sum(std::span<const double> rho, const DisplacementTable& kernel);

}  // namespace serial

namespace parallel {

void abs2(std::span<const cplx> u, std::span<double> out);
void scale(std::span<cplx> u, std::span<const double> w);
void scale(std::span<cplx> u, std::span<const cplx> w);
void multiply(std::span<const cplx> a, std::span<const double> w,
              std::span<cplx> out);
void phase_rotate(std::span<cplx> u, std::span<const double> potential,
                  double dt);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

double sum(std::span<const double> x);
double weighted_norm2(std::span<const cplx> u, std::span<const double> w);
double dot_real(std::span<const double> a, std::span<const double> b);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

double pair_sum(std::span<const double> rho, const DisplacementTable& kernel);

}  // namespace parallel

using namespace parallel;

/// Flat index of the displacement x_a - x_b, folded onto the periodic lattice.
std::size_t displacement_index(const Grid& grid, std::size_t a, std::size_t b);

}  // namespace fraclab::kernels
