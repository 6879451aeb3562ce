#include "fraclab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fraclab/fft.hpp"
#include "fraclab/kernels.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

RadialOrder::RadialOrder(const Grid& grid) : grid_(grid), order_(grid.size()) {
  std::vector<long> r2(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) r2[f] = squared_radius(f);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return r2[a] < r2[b]; });
}

long RadialOrder::squared_radius(std::size_t flat) const {
  auto idx = grid_.unflatten(flat);
  const int c = grid_.points_per_axis() / 2;
  long s = 0;
  for (int a = 0; a < grid_.dim(); ++a) {
    const long dj = idx[a] - c;
    s += dj * dj;
  }
  return s;
}

Field symmetric_rearrange(const Field& u) {
  return symmetric_rearrange(u, RadialOrder(u.grid()));
}

Field symmetric_rearrange(const Field& u, const RadialOrder& order) {
  if (!(u.grid() == order.grid())) throw InvalidInput("grid mismatch in rearrange");
  std::vector<double> mag(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mag[i] = std::abs(u[i]);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  Field out(u.grid());
  const auto& perm = order.permutation();
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = mag[i];
  return out;
}

double levy_concentration(const Field& u, double r) {
  const Grid& g = u.grid();
  if (!(r > 0.0) || r > 0.5 * g.length()) {
    throw InvalidInput("ball radius must satisfy 0 < r <= L/2");
  }
  const double h = g.spacing();
  const double r2 = r * r;
  // Indicator of the closed ball, indexed by lattice displacement.
  std::vector<cplx> ball(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    auto idx = g.unflatten(f);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double x = g.min_image(idx[a]) * h;
      s += x * x;
    }
    ball[f] = s <= r2 * (1.0 + 1e-12) ? 1.0 : 0.0;
  }
  Fft fft(g);
  std::vector<cplx> rho(g.size()), rho_hat(g.size()), ball_hat(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rho[i] = std::norm(u[i]);
  fft.forward(rho, rho_hat);
  fft.forward(ball, ball_hat);
  kernels::scale(std::span<cplx>(rho_hat), std::span<const cplx>(ball_hat));
  fft.inverse(rho_hat, rho);
  double best = 0.0;
  for (const cplx& z : rho) best = std::max(best, z.real());
  return best * g.cell_volume();
}

namespace {

void require_nonnegative(const Field& f, const char* name) {
  for (const cplx& z : f.values()) {
    if (z.imag() != 0.0 || z.real() < 0.0 || !std::isfinite(z.real())) {
      throw InvalidInput(std::string("riesz check needs real nonnegative ") + name);
    }
  }
}

}  // namespace

double riesz_functional_fft(const Field& f, const Field& g, const Field& h) {
  const Grid& grid = f.grid();
  Fft fft(grid);
  // Re-index g by displacement so that its centre sits at index 0.
  const int c = grid.points_per_axis() / 2;
  Field g0 = g.shifted({-c, -c, -c});
  std::vector<cplx> gh(grid.size()), hh(grid.size()), conv(grid.size());
  fft.forward(g0.values(), gh);
  fft.forward(h.values(), hh);
  kernels::scale(std::span<cplx>(gh), std::span<const cplx>(hh));
  fft.inverse(gh, conv);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += f[i].real() * conv[i].real();
  const double cv = grid.cell_volume();
  return s * cv * cv;
}

double riesz_functional(const Field& f, const Field& g, const Field& h) {
  require_same_grid(f, g, "riesz functional");
  require_same_grid(f, h, "riesz functional");
  const Grid& grid = f.grid();
  if (grid.size() > kDirectSumLimit) return riesz_functional_fft(f, g, h);

  const int n = grid.points_per_axis();
  const int c = n / 2;
  const int d = grid.dim();
  double s = 0.0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    if (f[x].real() == 0.0) continue;
    auto ix = grid.unflatten(x);
    double row = 0.0;
    for (std::size_t y = 0; y < grid.size(); ++y) {
      auto iy = grid.unflatten(y);
      std::array<int, 3> diff{0, 0, 0};
      for (int a = 0; a < d; ++a) diff[a] = ix[a] - iy[a] + c;
      row += g[grid.flatten(diff)].real() * h[y].real();
    }
    s += f[x].real() * row;
  }
  const double cv = grid.cell_volume();
  return s * cv * cv;
}

RieszCheck riesz_rearrangement_check(const Field& f, const Field& g,
                                     const Field& h) {
  require_same_grid(f, g, "riesz check");
  require_same_grid(f, h, "riesz check");
  require_nonnegative(f, "f");
  require_nonnegative(g, "g");
  require_nonnegative(h, "h");
  RadialOrder order(f.grid());
  const double lhs = riesz_functional(f, g, h);
  const double rhs =
      riesz_functional(symmetric_rearrange(f, order), symmetric_rearrange(g, order),
                       symmetric_rearrange(h, order));
  return {lhs, rhs};
}

}  // namespace fraclab
