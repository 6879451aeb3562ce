#include "fraclab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclab/kernels.hpp"
#include "fraclab/snapshot.hpp"

namespace fraclab {

namespace {

// Smallest step before backtracking gives up, relative to tau0.
constexpr double kMinStepRatio = 1e-14;

// Energy comparisons are made up to this multiple of eps * (T + H); below
// that level the decrease of a gradient step is not representable.
constexpr double kEnergyRoundoff = 64.0;

double l2_norm(const Field& u) { return std::sqrt(mass(u)); }

}  // namespace

void SolveOptions::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidInput("target mass q must be > 0");
  if (!(tau0 > 0.0)) throw InvalidInput("tau0 must be > 0");
  if (max_iter < 1) throw InvalidInput("maxIter must be >= 1");
  if (!(resid_tol > 0.0)) throw InvalidInput("residTol must be > 0");
  if (!(stall_tol > 0.0)) throw InvalidInput("stallTol must be > 0");
}

void project_to_mass(Field& u, double q) {
  const double m = mass(u);
  if (!(m > 0.0)) throw InvalidInput("cannot project the zero field to positive mass");
  u *= std::sqrt(q / m);
}

Field make_initial_guess(const Grid& grid, const SolveOptions& opts) {
  Field u(grid);
  if (const auto* gi = std::get_if<GaussianInit>(&opts.init)) {
    const double w = gi->width > 0.0 ? gi->width : grid.length() / 8.0;
    const cplx phase = std::polar(1.0, gi->phase);
    const double h = grid.spacing();
    for (std::size_t f = 0; f < grid.size(); ++f) {
      auto idx = grid.unflatten(f);
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        // Minimum-image offset from the (shifted) centre.
        int dj = idx[a] - grid.points_per_axis() / 2 - gi->offset[a];
        const int n = grid.points_per_axis();
        dj = ((dj % n) + n) % n;
        if (dj >= n / 2) dj -= n;
        r2 += (dj * h) * (dj * h);
      }
      u[f] = phase * std::exp(-r2 / (2.0 * w * w));
    }
  } else if (const auto* fi = std::get_if<FileInit>(&opts.init)) {
    auto snap = read_snapshot(fi->path);
    if (!(snap.field.grid() == grid)) {
      throw InvalidInput("initial field " + fi->path.string() + " does not match the grid");
    }
    u = std::move(snap.field);
  } else {
    const auto& given = std::get<FieldInit>(opts.init).field;
    if (!(given.grid() == grid)) throw InvalidInput("initial field does not match the grid");
    u = given;
  }
  project_to_mass(u, opts.q);
  return u;
}

double lagrange_multiplier(const Field& u, const Model& model) {
  const double m = mass(u);
  if (!(m > 0.0)) throw InvalidInput("lagrange multiplier of the zero field");
  const auto parts = energy_parts(u, model);
  return (parts.kinetic - parts.interaction) / m;
}

double euler_lagrange_residual(const Field& u, const Model& model) {
  const double m = mass(u);
  if (!(m > 0.0)) throw InvalidInput("residual of the zero field");
  Field r = energy_gradient(u, model);
  const double omega = real_inner(r, u) / m;
  kernels::axpy(-omega, u.values(), r.values());
  return std::sqrt(mass(r) / m);
}

double boundary_ratio(const Field& u) {
  const Grid& g = u.grid();
  double peak = 0.0, edge = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double a = std::abs(u[f]);
    peak = std::max(peak, a);
    auto idx = g.unflatten(f);
    for (int ax = 0; ax < g.dim(); ++ax) {
      if (idx[ax] == 0) {
        edge = std::max(edge, a);
        break;
      }
    }
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

GroundState minimize(const Model& model, const SolveOptions& opts) {
  opts.validate();
  Field u = make_initial_guess(model.grid(), opts);
  auto parts = energy_parts(u, model);
  double e = parts.total();
  if (!std::isfinite(e)) throw NumericalAbort("non-finite initial energy", 0);

  GroundState out{.g = u, .log = {}};
  out.q = opts.q;
  double tau = opts.tau0;
  const double tau_min = kMinStepRatio * opts.tau0;

  int it = 0;
  double omega = 0.0, resid = 0.0;
  for (;; ++it) {
    Field grad = energy_gradient(u, model);
    const double m = mass(u);
    omega = real_inner(grad, u) / m;
    Field r = grad;
    kernels::axpy(-omega, u.values(), r.values());
    resid = std::sqrt(mass(r) / m);
    if (!std::isfinite(resid) || !std::isfinite(omega)) {
      throw NumericalAbort("non-finite gradient in minimize", it);
    }
    out.log.push_back({it, e, omega, resid, tau});
    if (resid < opts.resid_tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    // Backtrack until the projected step lowers the energy.
    bool accepted = false;
    Field trial(model.grid());
    EnergyParts trial_parts = parts;
    double e_trial = e;
    const double slack = kEnergyRoundoff * std::numeric_limits<double>::epsilon() *
                         (parts.kinetic + parts.interaction);
    while (tau >= tau_min) {
      trial = u;
      kernels::axpy(-tau, grad.values(), trial.values());
      project_to_mass(trial, opts.q);
      trial_parts = energy_parts(trial, model);
      e_trial = trial_parts.total();
      if (!std::isfinite(e_trial)) throw NumericalAbort("non-finite energy in minimize", it);
      // Inside the roundoff band the energy cannot rank the two fields, so
      // the step must lower the residual instead.
      if (e_trial < e - slack ||
          (e_trial <= e + slack && euler_lagrange_residual(trial, model) < resid)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;

    const double change = std::sqrt(mass(trial - u)) / l2_norm(u);
    u = std::move(trial);
    e = e_trial;
    parts = trial_parts;
    tau = std::min(1.2 * tau, opts.tau0);
    if (change < opts.stall_tol) {
      ++it;
      out.log.push_back({it, e, lagrange_multiplier(u, model),
                         euler_lagrange_residual(u, model), tau});
      omega = out.log.back().omega;
      resid = out.log.back().residual;
      out.converged = resid < opts.resid_tol;
      break;
    }
  }

  out.g = std::move(u);
  out.E = e;
  out.omega = omega;
  out.residual = resid;
  out.iterations = it;
  out.boundary_ratio = boundary_ratio(out.g);
  return out;
}

Alignment align(const Field& f, const Field& g, const FractionalLaplacian& op) {
  require_same_grid(f, g, "align");
  const Grid& grid = f.grid();
  auto F = op.transform(f);
  auto G = op.transform(g);
  const auto w = op.sobolev_weight();
  std::vector<cplx> prod(grid.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(F[i]) * G[i] * w[i];
  const double fn = kernels::weighted_norm2(F, w);
  const double gn = kernels::weighted_norm2(G, w);
  if (fn == 0.0 || gn == 0.0) throw InvalidInput("align of a zero field");

  // corr[s] = <f(. - s h), g>_{H^alpha} up to the Parseval weight.
  std::vector<cplx> corr(grid.size());
  op.fft().backward(prod, corr);
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const double a = std::abs(corr[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  const auto s = grid.unflatten(best);
  const double theta = -std::arg(corr[best]);

  // Undo: e^{-i theta} f(. - s h) should match g.
  const int n = grid.points_per_axis();
  std::vector<cplx> diff(grid.size());
  const cplx rot = std::polar(1.0, -theta);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto kk = grid.unflatten(k);
    // Translation phase reduced modulo 2 pi on the integer lattice.
    long m = 0;
    for (int a = 0; a < grid.dim(); ++a) m += static_cast<long>(kk[a]) * s[a];
    m %= n;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(m) / n;
    diff[k] = rot * F[k] * std::polar(1.0, -phase) - G[k];
  }
  Alignment out;
  for (int a = 0; a < grid.dim(); ++a) {
    int sh = -s[a];
    sh = ((sh % n) + n) % n;
    if (sh >= n / 2) sh -= n;
    out.shift[a] = sh;
  }
  out.theta = std::remainder(theta, 2.0 * std::numbers::pi);
  out.dist = std::sqrt(kernels::weighted_norm2(diff, w) * op.parseval_weight());
  return out;
}

double scaling_exponent(const PhysicsParams& p) {
  return (4.0 * p.alpha - p.gamma) / (2.0 * p.alpha - p.gamma);
}

double ScalingTable::loglog_slope() const {
  const std::size_t n = rows.size();
  if (n < 2) throw InvalidInput("slope needs at least two rows");
  double mx = 0.0, my = 0.0;
  for (const auto& r : rows) {
    mx += std::log(r.lambda);
    my += std::log(std::abs(r.energy));
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : rows) {
    const double dx = std::log(r.lambda) - mx;
    sxy += dx * (std::log(std::abs(r.energy)) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ScalingTable scaling_experiment(const Model& model, double base_q,
                                const std::vector<double>& lambdas,
                                const SolveOptions& base_opts) {
  if (!(base_q > 0.0)) throw InvalidInput("base mass must be > 0");
  for (double l : lambdas) {
    if (!(l > 0.0)) throw InvalidInput("scaling factors must be > 0");
  }
  ScalingTable table{base_q, scaling_exponent(model.params()), {}};
  SolveOptions opts = base_opts;
  opts.q = base_q;
  const GroundState base = minimize(model, opts);
  for (double l : lambdas) {
    GroundState gs = base;
    if (l != 1.0) {
      opts.q = l * base_q;
      gs = minimize(model, opts);
    }
    table.rows.push_back({l, l * base_q, gs.E, gs.E / base.E,
                          std::pow(l, table.sigma), gs.residual,
                          gs.converged && base.converged});
  }
  return table;
}

Field glued_candidate(const Field& g1, const Field& g2, double q_total) {
  require_same_grid(g1, g2, "glued candidate");
  const int half = g1.grid().points_per_axis() / 2;
  Field u = g1 + g2.shifted({half, 0, 0});
  project_to_mass(u, q_total);
  return u;
}

Subadditivity subadditivity_check(const Model& model, double q1, double q2,
                                  const SolveOptions& base_opts) {
  if (!(q1 > 0.0) || !(q2 > 0.0)) {
    throw InvalidInput("subadditivity needs q1 > 0 and q2 > 0");
  }
  SolveOptions opts = base_opts;
  opts.q = q1;
  const GroundState s1 = minimize(model, opts);
  GroundState s2 = s1;
  if (q2 != q1) {
    opts.q = q2;
    s2 = minimize(model, opts);
  }
  opts.q = q1 + q2;
  const GroundState joint = minimize(model, opts);
  const Field glued = glued_candidate(s1.g, s2.g, q1 + q2);
  return {joint.E, s1.E + s2.E, s1.E, s2.E, energy(glued, model),
          s1.converged && s2.converged && joint.converged};
}

}  // namespace fraclab
