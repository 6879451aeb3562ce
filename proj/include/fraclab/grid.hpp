#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

using cplx = std::complex<double>;

/// Periodic box [-L/2, L/2)^d sampled at n points per axis.
///
/// Sample j along an axis sits at x_j = (j - n/2) h, so the box centre is the
/// lattice point with every index equal to n/2. Storage is row-major with the
/// last axis fastest. Wavenumbers use the FFT ordering m = 0..n/2-1, -n/2..-1.
class Grid {
 public:
  Grid(int d, int n, double L);

  int dim() const { return d_; }
  int points_per_axis() const { return n_; }
  double length() const { return L_; }
  double spacing() const { return L_ / n_; }
  double cell_volume() const;
  std::size_t size() const { return size_; }

  /// Signed FFT-ordered mode number for array index j.
  int mode(int j) const { return j < n_ / 2 ? j : j - n_; }
  double wavenumber(int j) const;

  /// Per-axis indices of a flat index.
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;

  /// Physical coordinate of sample j along one axis.
  double coordinate(int j) const { return (j - n_ / 2) * spacing(); }

  /// |k|^2 at every flat index.
  std::vector<double> wavenumber_squared() const;

  /// Minimum-image separation (in lattice units, per axis) of index
  /// difference j, folded into [0, n/2].
  int min_image(int j) const;

  bool operator==(const Grid& other) const = default;

 private:
  int d_;
  int n_;
  double L_;
  std::size_t size_;
};

/// Physical exponents of the fractional Hartree problem.
struct PhysicsParams {
  double alpha = 0.6;
  double gamma = 0.5;
  int d = 2;

  /// Throws InvalidInput naming the first violated constraint.
  void validate() const;
  void validate_against(const Grid& grid) const;
};

/// Complex samples bound to a grid.
class Field {
 public:
  explicit Field(const Grid& grid);
  Field(const Grid& grid, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx s);

  /// Periodic lattice translation: result(x) = this(x - shift * h).
  Field shifted(const std::array<int, 3>& shift) const;

  /// Pointwise modulus, stored as a real-valued field.
  Field magnitude() const;

  bool operator==(const Field& other) const = default;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx s, Field a);
Field operator*(Field a, cplx s);

void require_same_grid(const Field& a, const Field& b, const char* what);

}  // namespace fraclab
