#pragma once

#include <cstddef>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Grid points ordered by distance to the box centre.
///
/// Distances are compared exactly as integer squared lattice distances; ties
/// fall back to the flat (lexicographic) index.
class RadialOrder {
 public:
  explicit RadialOrder(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const std::vector<std::size_t>& permutation() const { return order_; }

  /// Squared centre distance of a flat index, in lattice units.
  long squared_radius(std::size_t flat) const;

 private:
  Grid grid_;
  std::vector<std::size_t> order_;
};

/// Symmetric decreasing rearrangement: the sorted magnitudes of u laid out
/// along the radial order. The result is real and nonnegative.
Field symmetric_rearrange(const Field& u);
Field symmetric_rearrange(const Field& u, const RadialOrder& order);

/// sup over grid centres y of the mass of u in the closed ball B(y, r).
/// Requires 0 < r <= L/2.
double levy_concentration(const Field& u, double r);

struct RieszCheck {
  double lhs;  // double integral of f(x) g(x-y) h(y)
  double rhs;  // the same with f*, g*, h*
  bool holds(double rel_slack = 1e-9) const { return lhs <= rhs + rel_slack * rhs; }
};

/// Evaluates both sides of the Riesz rearrangement inequality for real
/// nonnegative f, g, h. g is read as a function of the displacement x - y with
/// its zero at the box centre.
RieszCheck riesz_rearrangement_check(const Field& f, const Field& g,
                                     const Field& h);

/// The double integral alone; the direct O(N^2) sum when N <= 4096, the
/// convolution path otherwise.
double riesz_functional(const Field& f, const Field& g, const Field& h);

/// Always the convolution path (used to cross-check the direct sum).
double riesz_functional_fft(const Field& f, const Field& g, const Field& h);

}  // namespace fraclab
