#include "fraclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace fraclab {

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

// FFTW planning is not thread safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const Fft::Plans> plans_for(const Grid& grid) {
  static std::map<std::pair<int, int>, std::shared_ptr<const Fft::Plans>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(grid.dim(), grid.points_per_axis());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<int> dims(grid.dim(), grid.points_per_axis());
  std::vector<cplx> a(grid.size()), b(grid.size());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  // ESTIMATE keeps plans (and therefore results) identical run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  auto plans = std::make_shared<Fft::Plans>();
  plans->forward =
      fftw_plan_dft(grid.dim(), dims.data(), pa, pb, FFTW_FORWARD, flags);
  plans->backward =
      fftw_plan_dft(grid.dim(), dims.data(), pa, pb, FFTW_BACKWARD, flags);
  cache.emplace(key, plans);
  return plans;
}

fftw_complex* as_fftw(std::span<cplx> s) {
  return reinterpret_cast<fftw_complex*>(s.data());
}

// fftw's new-array execute takes non-const input even for out-of-place plans
// that never write it.
fftw_complex* as_fftw_in(std::span<const cplx> s) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(s.data()));
}

}  // namespace

Fft::Fft(const Grid& grid) : plans_(plans_for(grid)), size_(grid.size()) {}

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != size_ || out.size() != size_) {
    throw InvalidInput("fft size mismatch");
  }
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plans_->forward, as_fftw_in(tmp), as_fftw(out));
    return;
  }
  fftw_execute_dft(plans_->forward, as_fftw_in(in), as_fftw(out));
}

void Fft::backward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != size_ || out.size() != size_) {
    throw InvalidInput("fft size mismatch");
  }
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plans_->backward, as_fftw_in(tmp), as_fftw(out));
    return;
  }
  fftw_execute_dft(plans_->backward, as_fftw_in(in), as_fftw(out));
}

void Fft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  backward(in, out);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& z : out) z *= scale;
}

}  // namespace fraclab
