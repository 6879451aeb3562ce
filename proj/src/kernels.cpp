#include "fraclab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fraclab::kernels {

namespace {

void check(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("kernel span size mismatch");
}

using Index = std::ptrdiff_t;

std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

// Parallel reduction over fixed blocks; block partials are combined in index
// order so the result is independent of scheduling.
template <class T, class BlockFn>
T blocked_reduce(std::size_t n, BlockFn&& block_sum) {
  const std::size_t nb = block_count(n);
  std::vector<T> partial(nb, T{});
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < static_cast<Index>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[b] = block_sum(lo, hi);
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace

std::size_t displacement_index(const Grid& grid, std::size_t a,
                               std::size_t b) {
  const int d = grid.dim();
  const int n = grid.points_per_axis();
  std::size_t flat = 0;
  // Walk axes from the slowest; both indices share the row-major layout.
  std::size_t stride = grid.size();
  for (int ax = 0; ax < d; ++ax) {
    stride /= n;
    const int ia = static_cast<int>((a / stride) % n);
    const int ib = static_cast<int>((b / stride) % n);
    int diff = ia - ib;
    if (diff < 0) diff += n;
    flat = flat * n + static_cast<std::size_t>(diff);
  }
  return flat;
}

namespace serial {

void abs2(std::span<const cplx> u, std::span<double> out) {
  check(u.size(), out.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::norm(u[i]);
}

void scale(std::span<cplx> u, std::span<const double> w) {
  check(u.size(), w.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= w[i];
}

void scale(std::span<cplx> u, std::span<const cplx> w) {
  check(u.size(), w.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= w[i];
}

void multiply(std::span<const cplx> a, std::span<const double> w,
              std::span<cplx> out) {
  check(a.size(), w.size());
  check(a.size(), out.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * w[i];
}

void phase_rotate(std::span<cplx> u, std::span<const double> potential,
                  double dt) {
  check(u.size(), potential.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double phi = -potential[i] * dt;
    u[i] *= cplx(std::cos(phi), std::sin(phi));
  }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  check(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double weighted_norm2(std::span<const cplx> u, std::span<const double> w) {
  check(u.size(), w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::norm(u[i]);
  return s;
}

double dot_real(std::span<const double> a, std::span<const double> b) {
  check(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  check(a.size(), b.size());
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  check(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double pair_sum(std::span<const double> rho, const DisplacementTable& kernel) {
  check(rho.size(), kernel.values.size());
  const Grid& g = *kernel.grid;
  double s = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    for (std::size_t l = 0; l < rho.size(); ++l) {
      s += rho[j] * rho[l] * kernel.values[displacement_index(g, j, l)];
    }
  }
  return s;
}

}  // namespace serial

namespace parallel {

void abs2(std::span<const cplx> u, std::span<double> out) {
  check(u.size(), out.size());
  const Index n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = std::norm(u[i]);
}

void scale(std::span<cplx> u, std::span<const double> w) {
  check(u.size(), w.size());
  const Index n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) u[i] *= w[i];
}

void scale(std::span<cplx> u, std::span<const cplx> w) {
  check(u.size(), w.size());
  const Index n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) u[i] *= w[i];
}

void multiply(std::span<const cplx> a, std::span<const double> w,
              std::span<cplx> out) {
  check(a.size(), w.size());
  check(a.size(), out.size());
  const Index n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = a[i] * w[i];
}

void phase_rotate(std::span<cplx> u, std::span<const double> potential,
                  double dt) {
  check(u.size(), potential.size());
  const Index n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const double phi = -potential[i] * dt;
    u[i] *= cplx(std::cos(phi), std::sin(phi));
  }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  check(x.size(), y.size());
  const Index n = static_cast<Index>(x.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum(std::span<const double> x) {
  return blocked_reduce<double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

double weighted_norm2(std::span<const cplx> u, std::span<const double> w) {
  check(u.size(), w.size());
  return blocked_reduce<double>(u.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(u[i]);
    return s;
  });
}

double dot_real(std::span<const double> a, std::span<const double> b) {
  check(a.size(), b.size());
  return blocked_reduce<double>(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  check(a.size(), b.size());
  return blocked_reduce<cplx>(a.size(), [&](std::size_t lo, std::size_t hi) {
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
    return s;
  });
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  check(a.size(), b.size());
  const Index n = static_cast<Index>(a.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (Index i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double pair_sum(std::span<const double> rho, const DisplacementTable& kernel) {
  check(rho.size(), kernel.values.size());
  const Grid& g = *kernel.grid;
  const std::size_t n = rho.size();
  // One row of the double sum per output slot, rows added in order.
  std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < static_cast<Index>(n); ++j) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      s += rho[l] * kernel.values[displacement_index(g, j, l)];
    }
    row[j] = rho[j] * s;
  }
  double total = 0.0;
  for (double r : row) total += r;
  return total;
}

}  // namespace parallel

}  // namespace fraclab::kernels
