#include "fraclab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "json.hpp"

namespace fraclab {

Field band_limited_noise(const Grid& grid, std::uint64_t seed,
                         const FractionalLaplacian& op) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid.points_per_axis();
  std::vector<cplx> hat(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // Draw for every mode so the stream does not depend on the cutoff.
    const double re = normal(rng);
    const double im = normal(rng);
    auto idx = grid.unflatten(k);
    bool keep = true;
    for (int a = 0; a < grid.dim(); ++a) keep = keep && 3 * std::abs(grid.mode(idx[a])) < n;
    hat[k] = keep ? cplx(re, im) : cplx(0.0);
  }
  Field w(grid);
  op.fft().inverse(hat, w.values());
  const double norm = h_alpha_norm(w, op);
  w *= 1.0 / norm;
  return w;
}

Field perturb(const Field& g, double delta, std::uint64_t seed,
              const FractionalLaplacian& op) {
  if (!(delta >= 0.0)) throw InvalidInput("perturbation size must be >= 0");
  Field w = band_limited_noise(g.grid(), seed, op);
  w *= delta;
  return g + w;
}

double orbit_distance(const Field& psi, const Field& g, const FractionalLaplacian& op) {
  return align(psi, g, op).dist;
}

StabilityReport stability_run(const Model& model, const GroundState& ground,
                              const StabilityOptions& opts) {
  if (!(opts.T > 0.0) || !(opts.dt > 0.0)) throw InvalidInput("T and dt must be > 0");
  if (opts.stride < 1) throw InvalidInput("stride must be >= 1");
  const auto& op = model.laplacian();

  StabilityReport r;
  r.params = model.params();
  r.q = ground.q;
  r.delta = opts.delta;
  r.T = opts.T;
  r.dt = opts.dt;
  r.seed = opts.seed;
  r.ground_norm = h_alpha_norm(ground.g, op);

  Field psi = opts.delta > 0.0 ? perturb(ground.g, opts.delta, opts.seed, op) : ground.g;
  const double m0 = mass(psi);
  const double e0 = energy(psi, model);

  auto record = [&](double t) {
    const double d = orbit_distance(psi, ground.g, op);
    r.times.push_back(t);
    r.distance.push_back(d);
    r.sup_distance = std::max(r.sup_distance, d);
    r.mass_drift = std::max(r.mass_drift, std::abs(mass(psi) - m0) / m0);
    r.energy_drift = std::max(r.energy_drift, std::abs(energy(psi, model) - e0) / std::abs(e0));
  };

  long full = static_cast<long>(std::floor(opts.T / opts.dt * (1.0 + 1e-12)));
  double rest = opts.T - full * opts.dt;
  if (rest <= 1e-12 * opts.T) rest = 0.0;
  const long total = full + (rest > 0.0 ? 1 : 0);
  const SplitStepper stepper(model, opts.dt, opts.convention);
  std::optional<SplitStepper> last;
  if (rest > 0.0) last.emplace(model, rest, opts.convention);

  record(0.0);
  for (long s = 1; s <= total; ++s) {
    const bool is_last = s == total;
    (is_last && last ? *last : stepper).advance(psi);
    if (!psi.all_finite()) {
      r.complete = false;
      return r;
    }
    if (is_last) {
      record(opts.T);
    } else if (s % opts.stride == 0) {
      record(s * opts.dt);
    }
  }
  return r;
}

StabilityReport stability_run(const Model& model, double q, const SolveOptions& solve,
                              const StabilityOptions& opts) {
  SolveOptions s = solve;
  s.q = q;
  const GroundState ground = minimize(model, s);
  if (!ground.converged) {
    throw Error(ExitCode::kNotConverged, "ground state solve did not converge (residual " +
                                             std::to_string(ground.residual) + ")");
  }
  return stability_run(model, ground, opts);
}

void write_stability_json(const std::filesystem::path& path, const StabilityReport& r) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nlohmann::ordered_json j;
  j["params"] = {{"alpha", r.params.alpha}, {"gamma", r.params.gamma}, {"d", r.params.d}};
  j["q"] = r.q;
  j["delta"] = r.delta;
  j["T"] = r.T;
  j["dt"] = r.dt;
  j["seed"] = r.seed;
  j["supDistance"] = r.sup_distance;
  j["groundNorm"] = r.ground_norm;
  j["massDrift"] = r.mass_drift;
  j["energyDrift"] = r.energy_drift;
  j["complete"] = r.complete;
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.times.size(); ++i) series.push_back({r.times[i], r.distance[i]});
  j["distanceSeries"] = series;
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

void write_stability_csv(const std::filesystem::path& path, const StabilityReport& r) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << "t,distance\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.times.size(); ++i) os << r.times[i] << "," << r.distance[i] << "\n";
}

}  // namespace fraclab
