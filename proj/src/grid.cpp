#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fraclab {

Grid::Grid(int d, int n, double L) : d_(d), n_(n), L_(L) {
  if (d < 1 || d > 3) {
    throw InvalidInput("grid dimension must be 1, 2 or 3 (got " +
                       std::to_string(d) + ")");
  }
  if (n < 8 || n % 2 != 0) {
    throw InvalidInput("points per axis must be even and >= 8 (got " +
                       std::to_string(n) + ")");
  }
  if ((n & (n - 1)) != 0) {
    throw InvalidInput("points per axis must be a power of two (got " +
                       std::to_string(n) + ")");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw InvalidInput("box length must be positive and finite");
  }
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const { return std::pow(spacing(), d_); }

double Grid::wavenumber(int j) const {
  return 2.0 * std::numbers::pi * mode(j) / L_;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < d_; ++a) {
    int j = ((idx[a] % n_) + n_) % n_;
    flat = flat * n_ + static_cast<std::size_t>(j);
  }
  return flat;
}

std::vector<double> Grid::wavenumber_squared() const {
  std::vector<double> k1(n_);
  for (int j = 0; j < n_; ++j) k1[j] = wavenumber(j);
  std::vector<double> out(size_);
  for (std::size_t f = 0; f < size_; ++f) {
    auto idx = unflatten(f);
    double s = 0.0;
    for (int a = 0; a < d_; ++a) s += k1[idx[a]] * k1[idx[a]];
    out[f] = s;
  }
  return out;
}

int Grid::min_image(int j) const {
  j = ((j % n_) + n_) % n_;
  return std::min(j, n_ - j);
}

void PhysicsParams::validate() const {
  std::ostringstream msg;
  if (!(alpha > 0.0 && alpha < 1.0)) {
    msg << "constraint 0 < alpha < 1 violated (alpha = " << alpha << ")";
    throw InvalidInput(msg.str());
  }
  if (!(gamma > 0.0)) {
    msg << "constraint gamma > 0 violated (gamma = " << gamma << ")";
    throw InvalidInput(msg.str());
  }
  if (!(gamma < 2.0 * alpha)) {
    msg << "constraint gamma < 2*alpha violated (gamma = " << gamma
        << ", 2*alpha = " << 2.0 * alpha << ")";
    throw InvalidInput(msg.str());
  }
  if (d < 1 || d > 3) {
    msg << "dimension must be 1, 2 or 3 (d = " << d << ")";
    throw InvalidInput(msg.str());
  }
  if (!(gamma < d)) {
    msg << "constraint gamma < d violated (gamma = " << gamma << ", d = " << d
        << ")";
    throw InvalidInput(msg.str());
  }
}

void PhysicsParams::validate_against(const Grid& grid) const {
  validate();
  if (grid.dim() != d) {
    throw InvalidInput("dimension mismatch: params d = " + std::to_string(d) +
                       ", grid d = " + std::to_string(grid.dim()));
  }
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size()) {}

Field::Field(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidInput("field has " + std::to_string(values_.size()) +
                       " samples, grid expects " +
                       std::to_string(grid_.size()));
  }
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other[i];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (auto& z : values_) z *= s;
  return *this;
}

Field Field::shifted(const std::array<int, 3>& shift) const {
  Field out(grid_);
  const int d = grid_.dim();
  for (std::size_t f = 0; f < values_.size(); ++f) {
    auto idx = grid_.unflatten(f);
    for (int a = 0; a < d; ++a) idx[a] += shift[a];
    out[grid_.flatten(idx)] = values_[f];
  }
  return out;
}

Field Field::magnitude() const {
  Field out(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::abs(values_[i]);
  return out;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx s, Field a) { return a *= s; }
Field operator*(Field a, cplx s) { return a *= s; }

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid() == b.grid())) {
    throw InvalidInput(std::string("grid mismatch in ") + what);
  }
}

}  // namespace fraclab
