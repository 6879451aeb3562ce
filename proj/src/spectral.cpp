#include "fraclab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/kernels.hpp"

namespace fraclab {

namespace {

constexpr int kOriginRefinement = 5;

// Midpoint average of |x|^{-gamma} over [-h/2, h/2]^d.
double origin_cell_average(int d, double h, double gamma) {
  const int m = 1 << kOriginRefinement;
  const double sub = h / m;
  long count = 0;
  double s = 0.0;
  std::array<int, 3> idx{0, 0, 0};
  const long total = static_cast<long>(std::pow(m, d));
  for (long f = 0; f < total; ++f) {
    long rem = f;
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      idx[a] = static_cast<int>(rem % m);
      rem /= m;
      const double x = -0.5 * h + (idx[a] + 0.5) * sub;
      r2 += x * x;
    }
    s += std::pow(r2, -0.5 * gamma);
    ++count;
  }
  return s / count;
}

}  // namespace

FractionalLaplacian::FractionalLaplacian(const Grid& grid, double alpha)
    : grid_(grid), alpha_(alpha), fft_(grid) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInput("fractional exponent must be positive");
  }
  auto k2 = grid.wavenumber_squared();
  symbol_.resize(k2.size());
  sobolev_.resize(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    symbol_[i] = k2[i] == 0.0 ? 0.0 : std::pow(k2[i], alpha);
    sobolev_[i] = 1.0 + symbol_[i];
  }
  parseval_ = grid.cell_volume() / static_cast<double>(grid.size());
}

std::vector<cplx> FractionalLaplacian::transform(const Field& u) const {
  if (!(u.grid() == grid_)) throw InvalidInput("grid mismatch in transform");
  std::vector<cplx> hat(grid_.size());
  fft_.forward(u.values(), hat);
  return hat;
}

Field FractionalLaplacian::apply(const Field& u) const {
  auto hat = transform(u);
  kernels::scale(std::span<cplx>(hat), std::span<const double>(symbol_));
  Field out(grid_);
  fft_.inverse(hat, out.values());
  return out;
}

double FractionalLaplacian::seminorm_squared(const Field& u) const {
  auto hat = transform(u);
  return kernels::weighted_norm2(hat, symbol_) * parseval_;
}

HartreeKernel::HartreeKernel(const Grid& grid, double gamma)
    : grid_(grid), gamma_(gamma), fft_(grid) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("kernel exponent gamma must be positive");
  }
  const double h = grid.spacing();
  const int d = grid.dim();
  samples_.resize(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    auto idx = grid.unflatten(f);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double x = grid.min_image(idx[a]) * h;
      r2 += x * x;
    }
    samples_[f] = r2 == 0.0 ? 0.0 : std::pow(r2, -0.5 * gamma);
  }
  samples_[0] = origin_cell_average(d, h, gamma);

  std::vector<cplx> tmp(samples_.begin(), samples_.end());
  std::vector<cplx> hat(grid.size());
  fft_.forward(tmp, hat);
  spectrum_.resize(grid.size());
  // The samples are even, so the transform is real up to roundoff.
  for (std::size_t i = 0; i < hat.size(); ++i) spectrum_[i] = hat[i].real();
}

HartreeKernel HartreeKernel::zero(const Grid& grid) {
  HartreeKernel k(grid);
  k.samples_.assign(grid.size(), 0.0);
  k.spectrum_.assign(grid.size(), 0.0);
  k.zero_ = true;
  return k;
}

HartreeKernel HartreeKernel::with_spectrum_fault(double factor) const {
  HartreeKernel k = *this;
  for (auto& s : k.spectrum_) s *= factor;
  return k;
}

double HartreeKernel::total_integral() const {
  return kernels::sum(samples_) * grid_.cell_volume();
}

std::vector<double> HartreeKernel::convolve(
    std::span<const double> density) const {
  if (density.size() != grid_.size()) {
    throw InvalidInput("kernel/grid mismatch in convolution");
  }
  std::vector<double> out(grid_.size(), 0.0);
  if (zero_) return out;
  std::vector<cplx> buf(density.begin(), density.end());
  std::vector<cplx> hat(grid_.size());
  fft_.forward(buf, hat);
  kernels::scale(std::span<cplx>(hat), std::span<const double>(spectrum_));
  fft_.inverse(hat, buf);
  const double cv = grid_.cell_volume();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real() * cv;
  return out;
}

Model::Model(const Grid& grid, const PhysicsParams& params)
    : Model(grid, params, HartreeKernel(grid, params.gamma)) {}

Model::Model(const Grid& grid, const PhysicsParams& params,
             HartreeKernel kernel)
    : grid_(grid),
      params_(params),
      laplacian_(grid, params.alpha),
      kernel_(std::move(kernel)) {
  params.validate_against(grid);
  if (!(kernel_.grid() == grid)) throw InvalidInput("kernel/grid mismatch");
}

Field frac_laplacian(const Field& u, const FractionalLaplacian& op) {
  return op.apply(u);
}

Field frac_laplacian(const Field& u, const PhysicsParams& p) {
  p.validate_against(u.grid());
  return FractionalLaplacian(u.grid(), p.alpha).apply(u);
}

double mass(const Field& u) {
  std::vector<double> rho(u.size());
  kernels::abs2(u.values(), rho);
  return kernels::sum(rho) * u.grid().cell_volume();
}

double fourier_mass(const Field& u, const Fft& fft) {
  std::vector<cplx> hat(u.size());
  fft.forward(u.values(), hat);
  std::vector<double> rho(u.size());
  kernels::abs2(hat, rho);
  return kernels::sum(rho) * u.grid().cell_volume() /
         static_cast<double>(u.size());
}

double hartree_quadratic(const Field& u, const HartreeKernel& K) {
  if (!(u.grid() == K.grid())) throw InvalidInput("kernel/grid mismatch");
  std::vector<double> rho(u.size());
  kernels::abs2(u.values(), rho);
  auto pot = K.convolve(rho);
  return kernels::dot_real(rho, pot) * u.grid().cell_volume();
}

double hartree_direct(const Field& u, const HartreeKernel& K) {
  if (!(u.grid() == K.grid())) throw InvalidInput("kernel/grid mismatch");
  if (u.size() > kDirectSumLimit) {
    throw InvalidInput("direct pair sum limited to " +
                       std::to_string(kDirectSumLimit) + " points (got " +
                       std::to_string(u.size()) + ")");
  }
  std::vector<double> rho(u.size());
  kernels::abs2(u.values(), rho);
  const Grid& g = u.grid();
  const double cv = g.cell_volume();
  return kernels::pair_sum(rho, {&g, K.samples()}) * cv * cv;
}

EnergyParts energy_parts(const Field& u, const Model& model) {
  if (!(u.grid() == model.grid())) throw InvalidInput("field/model mismatch");
  return {model.laplacian().seminorm_squared(u),
          hartree_quadratic(u, model.kernel())};
}

double energy(const Field& u, const Model& model) {
  return energy_parts(u, model).total();
}

Field energy_gradient(const Field& u, const Model& model) {
  if (!(u.grid() == model.grid())) throw InvalidInput("field/model mismatch");
  Field g = model.laplacian().apply(u);
  std::vector<double> rho(u.size());
  kernels::abs2(u.values(), rho);
  auto pot = model.kernel().convolve(rho);
  std::vector<cplx> vu(u.size());
  kernels::multiply(u.values(), pot, vu);
  kernels::axpy(-1.0, vu, g.values());
  return g;
}

double h_alpha_norm(const Field& u, const FractionalLaplacian& op) {
  auto hat = op.transform(u);
  return std::sqrt(kernels::weighted_norm2(hat, op.sobolev_weight()) *
                   op.parseval_weight());
}

double hardy_sup_ratio(const Field& u, const HartreeKernel& K,
                       const FractionalLaplacian& op) {
  if (!(u.grid() == K.grid()) || !(u.grid() == op.grid())) {
    throw InvalidInput("grid mismatch in hardy_sup_ratio");
  }
  const double n2 = std::pow(h_alpha_norm(u, op), 2);
  if (n2 == 0.0) throw InvalidInput("hardy_sup_ratio of the zero field");
  std::vector<double> rho(u.size());
  kernels::abs2(u.values(), rho);
  auto pot = K.convolve(rho);
  return *std::max_element(pot.begin(), pot.end()) / n2;
}

cplx inner(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner product");
  return kernels::inner(a.values(), b.values()) * a.grid().cell_volume();
}

double real_inner(const Field& a, const Field& b) { return inner(a, b).real(); }

}  // namespace fraclab
