#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "fraclab/spectral.hpp"

namespace fraclab {

/// Gaussian exp(-|x - c|^2 / (2 w^2)) centred at the box centre plus an
/// optional lattice offset. width <= 0 selects the default L/8.
struct GaussianInit {
  double width = 0.0;
  std::array<int, 3> offset{0, 0, 0};
  double phase = 0.0;
};

struct FileInit {
  std::filesystem::path path;
};

struct FieldInit {
  Field field;
};

using InitialGuess = std::variant<GaussianInit, FileInit, FieldInit>;

struct SolveOptions {
  double q = 1.0;
  double tau0 = 1.0;
  int max_iter = 20000;
  double resid_tol = 1e-8;
  double stall_tol = 1e-15;
  InitialGuess init = GaussianInit{};
  std::uint64_t seed = 0;

  void validate() const;
};

struct IterationRecord {
  int iteration;
  double energy;
  double omega;
  double residual;
  double tau;
};

struct GroundState {
  Field g;
  double q = 0.0;
  double E = 0.0;
  double omega = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// max |g| on the box faces relative to max |g|.
  double boundary_ratio = 0.0;
  std::vector<IterationRecord> log;
};

inline constexpr double kBoundaryWarnRatio = 1e-8;

Field make_initial_guess(const Grid& grid, const SolveOptions& opts);

/// Rescale u to mass q (u must be nonzero).
void project_to_mass(Field& u, double q);

/// Projected gradient flow with backtracking on the fixed-mass sphere.
/// Throws NumericalAbort on NaN/overflow; non-convergence is reported through
/// GroundState::converged.
GroundState minimize(const Model& model, const SolveOptions& opts);

/// omega = (||(-Delta)^{alpha/2}u||^2 - H(u)) / M(u).
double lagrange_multiplier(const Field& u, const Model& model);

/// ||G(u) - omega(u) u||_2 / ||u||_2.
double euler_lagrange_residual(const Field& u, const Model& model);

double boundary_ratio(const Field& u);

struct Alignment {
  /// f is approximately e^{i theta} g(x - shift h).
  std::array<int, 3> shift{0, 0, 0};
  double theta = 0.0;
  /// H^alpha distance after undoing shift and phase.
  double dist = 0.0;
};

/// Best lattice translation and global phase taking f onto g in H^alpha.
Alignment align(const Field& f, const Field& g, const FractionalLaplacian& op);

/// (4 alpha - gamma) / (2 alpha - gamma): E_{lambda q} = lambda^sigma E_q.
double scaling_exponent(const PhysicsParams& p);

struct ScalingRow {
  double lambda;
  double mass;
  double energy;
  double ratio;      // E_{lambda q} / E_q
  double predicted;  // lambda^sigma
  double residual;
  bool converged;
};

struct ScalingTable {
  double base_q;
  double sigma;
  std::vector<ScalingRow> rows;

  /// Least-squares slope of log|E| against log lambda.
  double loglog_slope() const;
};

ScalingTable scaling_experiment(const Model& model, double base_q,
                                const std::vector<double>& lambdas,
                                const SolveOptions& base_opts);

struct Subadditivity {
  double e_joint;  // E_{q1+q2}
  double e_split;  // E_{q1} + E_{q2}
  double e_q1;
  double e_q2;
  double e_glued;  // energy of the two minimizers placed L/2 apart
  bool converged;
  double margin() const { return e_split - e_joint; }
};

/// Rescaled minimizers for q1 and q2 placed half a box apart along the
/// first axis, projected to mass q1 + q2.
Field glued_candidate(const Field& g1, const Field& g2, double q_total);

Subadditivity subadditivity_check(const Model& model, double q1, double q2,
                                  const SolveOptions& base_opts);

}  // namespace fraclab
