#include "fraclab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "fraclab/groundstate.hpp"
#include "fraclab/kernels.hpp"

namespace fraclab {

SplitStepper::SplitStepper(const Model& model, double dt, TimeConvention convention)
    : model_(&model),
      dt_(dt),
      sign_(convention == TimeConvention::kAsPrinted ? 1.0 : -1.0) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be > 0");
  const auto symbol = model.laplacian().symbol();
  half_phase_.resize(symbol.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    half_phase_[i] = std::polar(1.0, sign_ * symbol[i] * 0.5 * dt);
  }
}

void SplitStepper::advance(Field& psi) const {
  const Model& m = *model_;
  const Fft& fft = m.laplacian().fft();
  std::vector<cplx> hat(psi.size());

  fft.forward(psi.values(), hat);
  kernels::scale(std::span<cplx>(hat), std::span<const cplx>(half_phase_));
  fft.inverse(hat, psi.values());

  if (!m.kernel().is_zero()) {
    std::vector<double> rho(psi.size());
    kernels::abs2(psi.values(), rho);
    auto pot = m.kernel().convolve(rho);
    kernels::phase_rotate(psi.values(), pot, sign_ * dt_);
  }

  fft.forward(psi.values(), hat);
  kernels::scale(std::span<cplx>(hat), std::span<const cplx>(half_phase_));
  fft.inverse(hat, psi.values());
}

Field step(const Field& psi, double dt, const Model& model, TimeConvention convention) {
  if (!(psi.grid() == model.grid())) throw InvalidInput("field/model mismatch in step");
  Field out = psi;
  SplitStepper(model, dt, convention).advance(out);
  if (!out.all_finite()) throw NumericalAbort("non-finite field after step", 1);
  return out;
}

Trajectory evolve(const Field& psi0, double T, double dt, const Model& model,
                  const EvolveOptions& opts) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("final time T must be > 0");
  if (!(dt > 0.0)) throw InvalidInput("time step must be > 0");
  if (opts.snapshot_stride < 1) throw InvalidInput("snapshot stride must be >= 1");
  if (!(psi0.grid() == model.grid())) throw InvalidInput("field/model mismatch in evolve");

  // Full steps, with the remainder (if any) taken as one shortened step.
  long full = static_cast<long>(std::floor(T / dt * (1.0 + 1e-12)));
  double rest = T - full * dt;
  if (rest <= 1e-12 * T) rest = 0.0;
  if (full == 0 && rest == 0.0) full = 1;
  const long total = full + (rest > 0.0 ? 1 : 0);

  const SplitStepper stepper(model, dt, opts.convention);
  std::optional<SplitStepper> last;
  if (rest > 0.0) last.emplace(model, rest, opts.convention);

  Trajectory tr;
  Field psi = psi0;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.mass_series.push_back(mass(psi));
    tr.energy_series.push_back(energy(psi, model));
    if (opts.orbit_reference) {
      tr.orbit_distance.push_back(align(psi, *opts.orbit_reference, model.laplacian()).dist);
    }
    if (opts.keep_fields) tr.snapshots.push_back(psi);
  };
  record(0.0);
  for (long s = 1; s <= total; ++s) {
    const bool is_last = s == total;
    if (is_last && last) {
      last->advance(psi);
    } else {
      stepper.advance(psi);
    }
    if (!psi.all_finite()) throw NumericalAbort("non-finite field in evolve", s);
    tr.steps = s;
    if (is_last) {
      record(T);
    } else if (s % opts.snapshot_stride == 0) {
      record(s * dt);
    }
  }
  tr.final_state = std::move(psi);
  return tr;
}

ConservationReport conservation_report(const Trajectory& tr) {
  if (tr.times.empty()) throw InvalidInput("empty trajectory");
  const double m0 = tr.mass_series.front();
  const double e0 = tr.energy_series.front();
  ConservationReport r{0.0, 0.0};
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    r.mass_drift = std::max(r.mass_drift, std::abs(tr.mass_series[i] - m0) /
                                              std::max(std::abs(m0), 1e-300));
    r.energy_drift = std::max(r.energy_drift, std::abs(tr.energy_series[i] - e0) /
                                                  std::max(std::abs(e0), 1e-300));
  }
  return r;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  const bool orbit = !tr.orbit_distance.empty();
  os << "t,mass,energy" << (orbit ? ",orbitDistance" : "") << "\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << tr.times[i] << "," << tr.mass_series[i] << "," << tr.energy_series[i];
    if (orbit) os << "," << tr.orbit_distance[i];
    os << "\n";
  }
}

}  // namespace fraclab
