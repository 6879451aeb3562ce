#pragma once

// Generators and independent oracles shared by the unit suites. Nothing here
// calls into the FFT path of the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab::testing {

/// Naive O(n^2) DFT along one axis of a row-major array, sign -1 forward.
inline void naive_axis_dft(const Grid& g, std::vector<cplx>& a, int axis, int sign) {
  const int n = g.points_per_axis();
  const int d = g.dim();
  std::size_t stride = 1;
  for (int ax = d - 1; ax > axis; --ax) stride *= n;
  std::vector<cplx> line(n), out(n);
  for (std::size_t base = 0; base < a.size(); ++base) {
    auto idx = g.unflatten(base);
    if (idx[axis] != 0) continue;
    for (int j = 0; j < n; ++j) line[j] = a[base + j * stride];
    for (int k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        const long m = (static_cast<long>(k) * j) % n;
        s += line[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi * m / n);
      }
      out[k] = s;
    }
    for (int j = 0; j < n; ++j) a[base + j * stride] = out[j];
  }
}

/// -Laplacian by differentiating twice along each axis with naive DFTs.
inline Field spectral_neg_laplacian_oracle(const Field& u) {
  const Grid& g = u.grid();
  const int n = g.points_per_axis();
  Field out(g);
  for (int axis = 0; axis < g.dim(); ++axis) {
    std::vector<cplx> a(u.values().begin(), u.values().end());
    naive_axis_dft(g, a, axis, -1);
    for (std::size_t f = 0; f < a.size(); ++f) {
      const double k = g.wavenumber(g.unflatten(f)[axis]);
      a[f] *= cplx(0.0, k) * cplx(0.0, k);
    }
    naive_axis_dft(g, a, axis, +1);
    for (std::size_t f = 0; f < a.size(); ++f) out[f] -= a[f] / static_cast<double>(n);
  }
  return out;
}

/// Random trigonometric polynomial with physical modes |m_a| <= max_mode and
/// amplitudes decaying like exp(-|m|^2 / max_mode). The same seed produces the
/// same continuous function on every grid with enough resolution.
inline Field random_band_limited(const Grid& g, std::uint64_t seed, int max_mode = 4,
                                 double offset = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = g.dim();
  const double L = g.length();
  struct Mode {
    std::array<int, 3> m;
    cplx c;
  };
  std::vector<Mode> modes;
  const int span = 2 * max_mode + 1;
  const int count = static_cast<int>(std::pow(span, d));
  for (int f = 0; f < count; ++f) {
    int rem = f;
    std::array<int, 3> m{0, 0, 0};
    double m2 = 0.0;
    for (int a = 0; a < d; ++a) {
      m[a] = rem % span - max_mode;
      rem /= span;
      m2 += m[a] * m[a];
    }
    const double amp = std::exp(-m2 / max_mode);
    const double re = normal(rng), im = normal(rng);
    modes.push_back({m, amp * cplx(re, im)});
  }
  Field u(g);
  for (std::size_t f = 0; f < g.size(); ++f) {
    auto idx = g.unflatten(f);
    cplx s = offset;
    for (const auto& md : modes) {
      double phase = 0.0;
      for (int a = 0; a < d; ++a) {
        phase += 2.0 * std::numbers::pi * md.m[a] * g.coordinate(idx[a]) / L;
      }
      s += md.c * std::polar(1.0, phase);
    }
    u[f] = s;
  }
  return u;
}

/// Unstructured random complex samples.
inline Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = cplx(normal(rng), normal(rng));
  return u;
}

/// e^{i k.x} for lattice mode numbers m.
inline Field plane_wave(const Grid& g, const std::array<int, 3>& m) {
  Field u(g);
  for (std::size_t f = 0; f < g.size(); ++f) {
    auto idx = g.unflatten(f);
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      phase += 2.0 * std::numbers::pi * m[a] * g.coordinate(idx[a]) / g.length();
    }
    u[f] = std::polar(1.0, phase);
  }
  return u;
}

inline double plane_wave_k2(const Grid& g, const std::array<int, 3>& m) {
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double k = 2.0 * std::numbers::pi * m[a] / g.length();
    s += k * k;
  }
  return s;
}

/// Gaussian bump exp(-|x - c|^2 / (2 w^2)) with c given in physical units,
/// periodized by the minimum image.
inline Field gaussian_bump(const Grid& g, const std::array<double, 3>& c, double w) {
  Field u(g);
  const double L = g.length();
  for (std::size_t f = 0; f < g.size(); ++f) {
    auto idx = g.unflatten(f);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      double x = g.coordinate(idx[a]) - c[a];
      x -= L * std::round(x / L);
      r2 += x * x;
    }
    u[f] = std::exp(-r2 / (2.0 * w * w));
  }
  return u;
}

/// Literal Riemann sum of sum_j conj(a_j) b_j h^d, no library reductions.
inline cplx brute_inner(const Field& a, const Field& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().cell_volume();
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace fraclab::testing
