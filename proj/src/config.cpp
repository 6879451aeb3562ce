#include "fraclab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fraclab {

using json = nlohmann::ordered_json;

namespace {

json to_json(const RunConfig& c) {
  json j;
  j["physics"] = {{"alpha", c.physics.alpha},
                  {"gamma", c.physics.gamma},
                  {"d", c.physics.d},
                  {"interaction", c.physics.interaction}};
  j["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}};
  j["solver"] = {{"q", c.solver.q},
                 {"tau0", c.solver.tau0},
                 {"maxIter", c.solver.maxIter},
                 {"residTol", c.solver.residTol},
                 {"stallTol", c.solver.stallTol},
                 {"init", c.solver.init},
                 {"initWidth", c.solver.initWidth},
                 {"initFile", c.solver.initFile},
                 {"seed", c.solver.seed}};
  j["dynamics"] = {{"T", c.dynamics.T},
                   {"dt", c.dynamics.dt},
                   {"snapshotStride", c.dynamics.snapshotStride},
                   {"convention", c.dynamics.convention},
                   {"init", c.dynamics.init},
                   {"initFile", c.dynamics.initFile},
                   {"planeWaveMode", c.dynamics.planeWaveMode},
                   {"orbitDistance", c.dynamics.orbitDistance}};
  j["stability"] = {{"delta", c.stability.delta},
                    {"T", c.stability.T},
                    {"seed", c.stability.seed},
                    {"groundFile", c.stability.groundFile}};
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

// Reads known keys out of one section and complains about the rest.
class Section {
 public:
  Section(const json& root, const std::string& name) : name_(name) {
    if (!root.contains(name)) return;
    obj_ = &root.at(name);
    if (!obj_->is_object()) throw InvalidInput("config section '" + name + "' must be an object");
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    try {
      out = obj_->at(key).get<T>();
    } catch (const json::exception&) {
      throw InvalidInput("config key " + name_ + "." + key + " has the wrong type");
    }
  }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!seen_.count(k)) throw InvalidInput("unknown config key " + name_ + "." + k);
    }
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

// Integers are accepted only when they are exact.
void read_int(Section& s, const std::string& key, int& out) {
  double v = out;
  s.read(key, v);
  if (v != static_cast<int>(v)) throw InvalidInput("config key " + key + " must be an integer");
  out = static_cast<int>(v);
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  static const std::set<std::string> sections{"physics",  "grid",      "solver",
                                              "dynamics", "stability", "output"};
  for (const auto& [k, v] : j.items()) {
    if (!sections.count(k)) throw InvalidInput("unknown config section '" + k + "'");
  }
  RunConfig c;
  Section p(j, "physics");
  p.read("alpha", c.physics.alpha);
  p.read("gamma", c.physics.gamma);
  read_int(p, "d", c.physics.d);
  p.read("interaction", c.physics.interaction);
  p.finish();

  Section g(j, "grid");
  read_int(g, "n", c.grid.n);
  g.read("L", c.grid.L);
  g.finish();

  Section s(j, "solver");
  s.read("q", c.solver.q);
  s.read("tau0", c.solver.tau0);
  read_int(s, "maxIter", c.solver.maxIter);
  s.read("residTol", c.solver.residTol);
  s.read("stallTol", c.solver.stallTol);
  s.read("init", c.solver.init);
  s.read("initWidth", c.solver.initWidth);
  s.read("initFile", c.solver.initFile);
  s.read("seed", c.solver.seed);
  s.finish();

  Section d(j, "dynamics");
  d.read("T", c.dynamics.T);
  d.read("dt", c.dynamics.dt);
  read_int(d, "snapshotStride", c.dynamics.snapshotStride);
  d.read("convention", c.dynamics.convention);
  d.read("init", c.dynamics.init);
  d.read("initFile", c.dynamics.initFile);
  d.read("planeWaveMode", c.dynamics.planeWaveMode);
  d.read("orbitDistance", c.dynamics.orbitDistance);
  d.finish();

  Section st(j, "stability");
  st.read("delta", c.stability.delta);
  st.read("T", c.stability.T);
  st.read("seed", c.stability.seed);
  st.read("groundFile", c.stability.groundFile);
  st.finish();

  Section o(j, "output");
  o.read("directory", c.output.directory);
  o.read("formats", c.output.formats);
  o.finish();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  const Grid g = make_grid();
  params().validate_against(g);
  solve_options().validate();
  if (solver.init != "gaussian" && solver.init != "file") {
    throw InvalidInput("solver.init must be 'gaussian' or 'file'");
  }
  if (solver.init == "file" && solver.initFile.empty()) {
    throw InvalidInput("solver.init = 'file' needs solver.initFile");
  }
  if (!(dynamics.T > 0.0)) throw InvalidInput("dynamics.T must be > 0");
  if (!(dynamics.dt > 0.0)) throw InvalidInput("dynamics.dt must be > 0");
  if (dynamics.snapshotStride < 1) throw InvalidInput("dynamics.snapshotStride must be >= 1");
  convention();
  static const std::set<std::string> inits{"groundstate", "file", "gaussian", "plane-wave"};
  if (!inits.count(dynamics.init)) {
    throw InvalidInput("dynamics.init must be one of groundstate, file, gaussian, plane-wave");
  }
  if (dynamics.init == "file" && dynamics.initFile.empty()) {
    throw InvalidInput("dynamics.init = 'file' needs dynamics.initFile");
  }
  if (!(stability.delta >= 0.0)) throw InvalidInput("stability.delta must be >= 0");
  if (!(stability.T > 0.0)) throw InvalidInput("stability.T must be > 0");
  for (const auto& f : output.formats) {
    if (f != "json" && f != "csv" && f != "snapshot") {
      throw InvalidInput("unknown output format '" + f + "'");
    }
  }
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) !=
         output.formats.end();
}

Grid RunConfig::make_grid() const { return Grid(physics.d, grid.n, grid.L); }

PhysicsParams RunConfig::params() const {
  return PhysicsParams{physics.alpha, physics.gamma, physics.d};
}

Model RunConfig::make_model() const {
  const Grid g = make_grid();
  if (!physics.interaction) return Model(g, params(), HartreeKernel::zero(g));
  return Model(g, params());
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.q = solver.q;
  o.tau0 = solver.tau0;
  o.max_iter = solver.maxIter;
  o.resid_tol = solver.residTol;
  o.stall_tol = solver.stallTol;
  o.seed = solver.seed;
  if (solver.init == "file") {
    o.init = FileInit{solver.initFile};
  } else {
    o.init = GaussianInit{solver.initWidth, {0, 0, 0}, 0.0};
  }
  return o;
}

TimeConvention RunConfig::convention() const {
  if (dynamics.convention == "as-printed") return TimeConvention::kAsPrinted;
  if (dynamics.convention == "standard") return TimeConvention::kStandard;
  throw InvalidInput("dynamics.convention must be 'as-printed' or 'standard'");
}

StabilityOptions RunConfig::stability_options() const {
  StabilityOptions o;
  o.delta = stability.delta;
  o.T = stability.T;
  o.dt = dynamics.dt;
  o.stride = dynamics.snapshotStride;
  o.seed = stability.seed;
  o.convention = convention();
  return o;
}

std::filesystem::path RunConfig::output_dir() const {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return output.directory;
}

std::string RunConfig::to_json_text() const { return to_json(*this).dump(2); }

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw InvalidInput("override must look like section.key=value: " + assignment);
  }
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json j = to_json(cfg);
  if (!j.contains(section)) throw InvalidInput("unknown config section '" + section + "'");
  if (!j[section].contains(key)) throw InvalidInput("unknown config key " + section + "." + key);
  j[section][key] = value;
  cfg = from_json(j);
}

}  // namespace fraclab
