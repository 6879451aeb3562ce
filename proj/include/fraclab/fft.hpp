#pragma once

#include <memory>
#include <span>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Unnormalized d-dimensional complex DFT on a Grid.
///
/// forward: U_k = sum_j u_j exp(-i k.x_j') with x_j' = j h (index origin),
/// backward: the same with +i. backward(forward(u)) == N u.
/// Plans are created once per (d, n) and shared; execution is reentrant.
class Fft {
 public:
  explicit Fft(const Grid& grid);

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void backward(std::span<const cplx> in, std::span<cplx> out) const;

  /// backward followed by division by N.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  std::size_t size() const { return size_; }

  struct Plans;

 private:
  std::shared_ptr<const Plans> plans_;
  std::size_t size_;
};

}  // namespace fraclab
