#include "lake/transport.hpp"

#include <cmath>
#include <sstream>

namespace lake {

namespace {

// one RK3 (Kutta) step of dX/dt = f(t, X)
template <typename F>
Vec2 rk3_step(F&& f, double t, const Vec2& x, double h) {
  Vec2 k1 = f(t, x);
  Vec2 k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  Vec2 k3 = f(t + h, x - h * k1 + 2.0 * h * k2);
  return x + (h / 6.0) * (k1 + 4.0 * k2 + k3);
}

}  // namespace

LakeState make_state(const EllipticSolver& solver, const IslandBasis& basis,
                     const ScalarField& omega0,
                     const Eigen::VectorXd& circulations) {
  LakeState s;
  s.t = 0.0;
  s.omega = omega0;
  s.circulations = circulations;
  s.psi = assemble_stream(solver, basis, omega0, circulations);
  s.u = velocity_from_stream(s.psi, solver.bathymetry());
  return s;
}

std::vector<Vec2> flow_map(const FlowMapper& mapper, double t0, double t1,
                           std::vector<Vec2> points, double* clamped_distance) {
  const double span = t1 - t0;
  if (span == 0.0) return points;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(std::abs(span) /
                                                           mapper.max_substep)));
  const double h = span / n_sub;

  auto eval = [&](double t, const Vec2& x) {
    Vec2 p = mapper.domain ? clamp_into_domain(*mapper.domain, x) : x;
    return mapper.velocity(t, p);
  };

  double clamped = 0.0;
  for (Vec2& p : points) {
    double t = t0;
    for (int k = 0; k < n_sub; ++k) {
      p = rk3_step(eval, t, p, h);
      if (mapper.domain) p = clamp_into_domain(*mapper.domain, p, &clamped);
      t += h;
    }
  }
  if (clamped_distance) *clamped_distance += clamped;
  return points;
}

LakeState advect(const LakeState& state, double dt, const EllipticSolver& solver,
                 const IslandBasis& basis, const BathymetryField& b,
                 const TransportOptions& opts) {
  const Grid& g = solver.grid();
  const double umax = state.u.max_speed();
  const double dt_limit = opts.cfl * g.cfl_spacing() / std::max(umax, 1e-300);
  if (dt > dt_limit) {
    std::ostringstream msg;
    msg << "advect: dt = " << dt << " exceeds the advective limit; need dt <= "
        << dt_limit;
    throw CflViolation(dt_limit, msg.str());
  }

  // potential vorticity at nodes
  ScalarField pv(g);
  Eigen::ArrayXd depth(g.node_count());
  for (int id = 0; id < g.node_count(); ++id)
    depth[id] = b.depth(g.positions[id]);
  pv.values = state.omega.values / depth;

  const int n_sub = std::max(1, opts.substeps);
  const double h = -dt / n_sub;  // backward tracing
  const DomainSpec& dom = g.domain;

  auto frozen = [&](double, const Vec2& x) {
    return interpolate(state.u, clamp_into_domain(dom, x));
  };

  LakeState next;
  next.t = state.t + dt;
  next.circulations = state.circulations;
  next.omega = ScalarField(g);

  Eigen::ArrayXd clamp_per_node = Eigen::ArrayXd::Zero(g.node_count());
  const int n = g.node_count();
#pragma omp parallel for schedule(static)
  for (int id = 0; id < n; ++id) {
    Vec2 foot = g.positions[id];
    double clamped = 0.0;
    for (int k = 0; k < n_sub; ++k) {
      foot = rk3_step(frozen, 0.0, foot, h);
      foot = clamp_into_domain(dom, foot, &clamped);
    }
    next.omega.values[id] =
        depth[id] * interpolate(pv, foot, opts.monotone_clip);
    clamp_per_node[id] = clamped;
  }

  next.clamped_distance = state.clamped_distance + clamp_per_node.sum();
  next.psi = assemble_stream(solver, basis, next.omega, next.circulations,
                             &state.psi);
  next.u = velocity_from_stream(next.psi, b);
  return next;
}

LakeState step_simulation(LakeState state, double dt, int n_steps,
                          const EllipticSolver& solver, const IslandBasis& basis,
                          const BathymetryField& b, const TransportOptions& opts,
                          int record_interval, const RecordHook& hook) {
  if (record_interval < 1) record_interval = 1;
  if (hook) hook(state, 0);
  for (int k = 1; k <= n_steps; ++k) {
    state = advect(state, dt, solver, basis, b, opts);
    if (hook && (k % record_interval == 0 || k == n_steps)) hook(state, k);
  }
  return state;
}

}  // namespace lake
