#include "fraclab/reports.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#ifndef FRACLAB_VERSION
#define FRACLAB_VERSION "0.0.0"
#endif
#ifndef FRACLAB_GIT_REVISION
#define FRACLAB_GIT_REVISION ""
#endif

namespace fraclab {

using json = nlohmann::ordered_json;

std::string version_string() {
  std::string v = FRACLAB_VERSION;
  const std::string rev = FRACLAB_GIT_REVISION;
  if (!rev.empty()) v += "+" + rev;
  return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << text;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg) {
  json j;
  j["command"] = command;
  j["version"] = version_string();
  j["seeds"] = {{"solver", cfg.solver.seed}, {"stability", cfg.stability.seed}};
  j["config"] = json::parse(cfg.to_json_text());
  write_text(dir / "manifest.json", j.dump(2) + "\n");
}

void write_groundstate_summary(const std::filesystem::path& path, const GroundState& gs,
                               const Model& model) {
  const auto& p = model.params();
  const auto& g = model.grid();
  json j;
  j["q"] = gs.q;
  j["E"] = gs.E;
  j["omega"] = gs.omega;
  j["residual"] = gs.residual;
  j["iterations"] = gs.iterations;
  j["converged"] = gs.converged;
  j["boundaryRatio"] = gs.boundary_ratio;
  j["params"] = {{"alpha", p.alpha}, {"gamma", p.gamma}, {"d", p.d}};
  j["grid"] = {{"n", g.points_per_axis()}, {"L", g.length()}};
  write_text(path, j.dump(2) + "\n");
}

void write_iteration_log_csv(const std::filesystem::path& path, const GroundState& gs) {
  std::ostringstream os;
  os << "iteration,energy,omega,residual,tau\n" << std::setprecision(17);
  for (const auto& r : gs.log) {
    os << r.iteration << "," << r.energy << "," << r.omega << "," << r.residual << ","
       << r.tau << "\n";
  }
  write_text(path, os.str());
}

void write_scaling_csv(const std::filesystem::path& path, const ScalingTable& table) {
  std::ostringstream os;
  os << "lambda,mass,energy,ratio,predicted,residual,converged\n" << std::setprecision(17);
  for (const auto& r : table.rows) {
    os << r.lambda << "," << r.mass << "," << r.energy << "," << r.ratio << ","
       << r.predicted << "," << r.residual << "," << (r.converged ? 1 : 0) << "\n";
  }
  write_text(path, os.str());
}

void write_subadditivity_json(const std::filesystem::path& path, const Subadditivity& s) {
  json j;
  j["eJoint"] = s.e_joint;
  j["eSplit"] = s.e_split;
  j["eQ1"] = s.e_q1;
  j["eQ2"] = s.e_q2;
  j["eGlued"] = s.e_glued;
  j["margin"] = s.margin();
  j["converged"] = s.converged;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace fraclab
