#pragma once

#include <filesystem>
#include <string>

#include "fraclab/config.hpp"
#include "fraclab/groundstate.hpp"

namespace fraclab {

/// Library version string, with the git revision when it was known at
/// configure time.
std::string version_string();

/// manifest.json: command, config echo, version and the seeds in use.
/// Contains nothing that varies between identical runs.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg);

/// {q, E, omega, residual, iterations, converged, boundaryRatio, params, grid}
void write_groundstate_summary(const std::filesystem::path& path, const GroundState& gs,
                               const Model& model);

/// iteration,energy,omega,residual,tau
void write_iteration_log_csv(const std::filesystem::path& path, const GroundState& gs);

/// lambda,mass,energy,ratio,predicted,residual,converged
void write_scaling_csv(const std::filesystem::path& path, const ScalingTable& table);

void write_subadditivity_json(const std::filesystem::path& path, const Subadditivity& s);

/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fraclab
