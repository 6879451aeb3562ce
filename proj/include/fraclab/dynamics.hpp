#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "fraclab/spectral.hpp"

namespace fraclab {

/// Which way the flow is integrated.
///
/// kAsPrinted integrates i psi_t + (-Delta)^alpha psi - (K * |psi|^2) psi = 0,
/// so the free phase is e^{+i|k|^{2 alpha} t}. kStandard is its time reversal
/// i psi_t = (-Delta)^alpha psi - (K * |psi|^2) psi.
enum class TimeConvention { kAsPrinted, kStandard };

/// Strang splitting with exact substeps at a fixed dt: half free step,
/// full potential step e^{-i V dt} (exact, |psi| is frozen), half free step.
class SplitStepper {
 public:
  SplitStepper(const Model& model, double dt,
               TimeConvention convention = TimeConvention::kAsPrinted);

  double dt() const { return dt_; }

  /// Advances psi in place by one step.
  void advance(Field& psi) const;

 private:
  const Model* model_;
  double dt_;
  double sign_;
  std::vector<cplx> half_phase_;
};

Field step(const Field& psi, double dt, const Model& model,
           TimeConvention convention = TimeConvention::kAsPrinted);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  std::vector<double> orbit_distance;  // empty unless a reference was given
  std::vector<Field> snapshots;        // empty unless requested
  std::optional<Field> final_state;    // psi(T)
  long steps = 0;
};

struct EvolveOptions {
  int snapshot_stride = 1;
  bool keep_fields = false;
  TimeConvention convention = TimeConvention::kAsPrinted;
  /// When set, orbit distance to this profile is recorded at each snapshot.
  const Field* orbit_reference = nullptr;
};

/// Integrates to time T with steps of dt; the last step is shortened so the
/// final recorded time is exactly T. Records t = 0, every stride-th step, and
/// the final step.
Trajectory evolve(const Field& psi0, double T, double dt, const Model& model,
                  const EvolveOptions& opts = {});

struct ConservationReport {
  double mass_drift;
  double energy_drift;
};

/// Largest relative deviations of mass and energy from their t = 0 values.
ConservationReport conservation_report(const Trajectory& tr);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

}  // namespace fraclab
