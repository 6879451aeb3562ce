#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fraclab/dynamics.hpp"
#include "fraclab/groundstate.hpp"

namespace fraclab {

/// Seeded random field with the top third of each axis' spectrum removed,
/// normalized to unit H^alpha norm.
Field band_limited_noise(const Grid& grid, std::uint64_t seed,
                         const FractionalLaplacian& op);

/// g + delta w, w = band_limited_noise(seed).
Field perturb(const Field& g, double delta, std::uint64_t seed,
              const FractionalLaplacian& op);

/// H^alpha distance from psi to the translation/phase orbit of g.
double orbit_distance(const Field& psi, const Field& g, const FractionalLaplacian& op);

struct StabilityReport {
  PhysicsParams params;
  double q = 0.0;
  double delta = 0.0;
  double T = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> distance;
  double sup_distance = 0.0;
  double ground_norm = 0.0;  // h_alpha_norm of the reference minimizer
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  bool complete = true;  // false when the run aborted part way
};

struct StabilityOptions {
  double delta = 1e-2;
  double T = 20.0;
  double dt = 1e-3;
  int stride = 100;
  std::uint64_t seed = 1;
  TimeConvention convention = TimeConvention::kAsPrinted;
};

/// Evolves perturb(g, delta) and tracks the orbit distance to g.
StabilityReport stability_run(const Model& model, const GroundState& ground,
                              const StabilityOptions& opts);

/// Solves for the minimizer at mass q first.
StabilityReport stability_run(const Model& model, double q, const SolveOptions& solve,
                              const StabilityOptions& opts);

void write_stability_json(const std::filesystem::path& path, const StabilityReport& r);
void write_stability_csv(const std::filesystem::path& path, const StabilityReport& r);

}  // namespace fraclab
