#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fraclab/dynamics.hpp"
#include "fraclab/groundstate.hpp"
#include "fraclab/stability.hpp"

namespace fraclab {

/// Environment variable that, when set, replaces output.directory.
inline constexpr const char* kOutputDirEnv = "FRACLAB_OUTPUT_DIR";

/// Everything a subcommand needs. Defaults are the reference run.
///
/// On disk this is a JSON document with one object per section; every key is
/// optional and unknown keys are rejected.
struct RunConfig {
  struct Physics {
    double alpha = 0.6;
    double gamma = 0.5;
    int d = 2;
    bool interaction = true;  // false switches the Hartree term off
  } physics;

  struct GridSection {
    int n = 128;
    double L = 160.0;
  } grid;

  struct Solver {
    double q = 1.0;
    double tau0 = 1.0;
    int maxIter = 20000;
    double residTol = 1e-8;
    double stallTol = 1e-15;
    std::string init = "gaussian";  // gaussian | file
    double initWidth = 0.0;         // <= 0 means L/8
    std::string initFile;
    std::uint64_t seed = 1;
  } solver;

  struct Dynamics {
    double T = 10.0;
    double dt = 1e-3;
    int snapshotStride = 100;
    std::string convention = "as-printed";  // as-printed | standard
    std::string init = "groundstate";       // groundstate | file | gaussian | plane-wave
    std::string initFile;
    std::array<int, 3> planeWaveMode{1, 0, 0};
    bool orbitDistance = true;
  } dynamics;

  struct StabilitySection {
    double delta = 1e-2;
    double T = 20.0;
    std::uint64_t seed = 1;
    std::string groundFile;  // reuse a saved minimizer instead of solving
  } stability;

  struct Output {
    std::string directory = "fraclab-out";
    std::vector<std::string> formats{"json", "csv", "snapshot"};
  } output;

  /// Re-checks every physics, grid and solver invariant.
  void validate() const;

  bool wants(const std::string& format) const;

  Grid make_grid() const;
  PhysicsParams params() const;
  Model make_model() const;
  SolveOptions solve_options() const;
  TimeConvention convention() const;
  StabilityOptions stability_options() const;

  /// Output directory after the environment override.
  std::filesystem::path output_dir() const;

  /// Canonical JSON text of the whole config (the manifest echo).
  std::string to_json_text() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value"; value is parsed as JSON, falling back to a
/// plain string.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace fraclab
