#pragma once

#include <span>
#include <vector>

#include "fraclab/fft.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

/// Fourier multiplier |k|^{2 alpha} on a periodic grid.
///
/// Transforms are unnormalized DFTs; L^2 quantities on the Fourier side carry
/// the Parseval weight cellVolume / N, so every reported integral is the
/// midpoint-rule value of its physical-space counterpart.
class FractionalLaplacian {
 public:
  FractionalLaplacian(const Grid& grid, double alpha);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  const Fft& fft() const { return fft_; }

  /// |k|^{2 alpha} in FFT order; the zero mode is 0.
  std::span<const double> symbol() const { return symbol_; }

  /// 1 + |k|^{2 alpha}, the H^alpha weight.
  std::span<const double> sobolev_weight() const { return sobolev_; }

  double parseval_weight() const { return parseval_; }

  Field apply(const Field& u) const;

  /// ||(-Delta)^{alpha/2} u||_2^2.
  double seminorm_squared(const Field& u) const;

  /// Forward transform of u into a fresh buffer.
  std::vector<cplx> transform(const Field& u) const;

 private:
  Grid grid_;
  double alpha_;
  Fft fft_;
  std::vector<double> symbol_;
  std::vector<double> sobolev_;
  double parseval_;
};

/// Convolution kernel |x|^{-gamma} sampled under the minimum-image metric.
///
/// samples() is indexed by flat lattice displacement. The origin sample is
/// the midpoint-rule cell average of |x|^{-gamma} over the origin cell on a
/// 2^5-per-axis sub-lattice.
class HartreeKernel {
 public:
  HartreeKernel(const Grid& grid, double gamma);

  /// The identically-zero kernel (switches the nonlinearity off).
  static HartreeKernel zero(const Grid& grid);

  const Grid& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  bool is_zero() const { return zero_; }

  std::span<const double> samples() const { return samples_; }
  std::span<const double> spectrum() const { return spectrum_; }
  double origin_value() const { return samples_.empty() ? 0.0 : samples_[0]; }

  /// (K * rho)_j = sum_l K(x_j - x_l) rho_l cellVolume, via the spectrum.
  std::vector<double> convolve(std::span<const double> density) const;

  /// Copy whose spectrum (but not spatial samples) is multiplied by factor.
  /// Only the transform path sees the change; used to inject a known fault.
  HartreeKernel with_spectrum_fault(double factor) const;

  /// Integral of K over the box.
  double total_integral() const;

 private:
  HartreeKernel(const Grid& grid) : grid_(grid), gamma_(0.0), fft_(grid) {}

  Grid grid_;
  double gamma_;
  Fft fft_;
  std::vector<double> samples_;
  std::vector<double> spectrum_;
  bool zero_ = false;
};

/// Grid, exponents and the two operators they induce.
class Model {
 public:
  Model(const Grid& grid, const PhysicsParams& params);
  Model(const Grid& grid, const PhysicsParams& params, HartreeKernel kernel);

  const Grid& grid() const { return grid_; }
  const PhysicsParams& params() const { return params_; }
  const FractionalLaplacian& laplacian() const { return laplacian_; }
  const HartreeKernel& kernel() const { return kernel_; }

 private:
  Grid grid_;
  PhysicsParams params_;
  FractionalLaplacian laplacian_;
  HartreeKernel kernel_;
};

Field frac_laplacian(const Field& u, const FractionalLaplacian& op);
Field frac_laplacian(const Field& u, const PhysicsParams& p);

/// sum |u_j|^2 cellVolume.
double mass(const Field& u);

/// Mass evaluated on the Fourier side; equal to mass(u) by Parseval.
double fourier_mass(const Field& u, const Fft& fft);

/// Double integral of |u(x)|^2 K(x-y) |u(y)|^2 via fast convolution.
double hartree_quadratic(const Field& u, const HartreeKernel& K);

inline constexpr std::size_t kDirectSumLimit = 4096;

/// The same double integral as a literal O(N^2) pair sum. Guarded to N <= 4096.
double hartree_direct(const Field& u, const HartreeKernel& K);

/// Kinetic and interaction parts of the energy.
struct EnergyParts {
  double kinetic;      // ||(-Delta)^{alpha/2} u||^2
  double interaction;  // hartree_quadratic
  double total() const { return 0.5 * kinetic - 0.25 * interaction; }
};

EnergyParts energy_parts(const Field& u, const Model& model);
double energy(const Field& u, const Model& model);

/// (-Delta)^alpha u - (K * |u|^2) u; the L^2 gradient of energy().
Field energy_gradient(const Field& u, const Model& model);

/// (||u||_2^2 + ||u||_{dot H^alpha}^2)^{1/2}.
double h_alpha_norm(const Field& u, const FractionalLaplacian& op);

/// max_y (K * |u|^2)(y) / h_alpha_norm(u)^2.
double hardy_sup_ratio(const Field& u, const HartreeKernel& K,
                       const FractionalLaplacian& op);

/// Re <a, b>_{L^2} = Re sum conj(a_j) b_j cellVolume.
double real_inner(const Field& a, const Field& b);
cplx inner(const Field& a, const Field& b);

}  // namespace fraclab
