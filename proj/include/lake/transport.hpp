// Semi-Lagrangian transport of the potential vorticity omega/b.
//
// Each step traces characteristics backward with third-order Runge-Kutta
// (three substeps, velocity frozen within the step), interpolates omega/b at
// the feet and rescales by the local depth.  Feet that leave the domain by
// discretization error are projected back along the boundary normal and the
// projection distance is accumulated as a diagnostic.
#pragma once

#include "lake/elliptic.hpp"
#include "lake/velocity.hpp"

#include <functional>

namespace lake {

struct LakeState {
  double t = 0.0;
  ScalarField omega;
  Eigen::VectorXd circulations;
  // caches, consistent with omega and circulations after every accepted step
  ScalarField psi;
  VelocityField u;
  double clamped_distance = 0.0;  // cumulative feet-projection distance
};

// initial state with consistent stream and velocity caches
LakeState make_state(const EllipticSolver& solver, const IslandBasis& basis,
                     const ScalarField& omega0, const Eigen::VectorXd& circulations);

struct CflViolation : std::runtime_error {
  double required_dt;
  CflViolation(double dt_needed, const std::string& what)
      : std::runtime_error(what), required_dt(dt_needed) {}
};

// Characteristic tracer for a (possibly time-dependent) velocity field.
struct FlowMapper {
  std::function<Vec2(double t, const Vec2& x)> velocity;
  const DomainSpec* domain = nullptr;  // when set, feet are clamped into it
  double max_substep = 1e-2;
};

// Integrate dX/dt = u(t, X) from t0 to t1 (either direction) for a batch of
// points.  Adds any clamp displacement to *clamped_distance.
std::vector<Vec2> flow_map(const FlowMapper& mapper, double t0, double t1,
                           std::vector<Vec2> points,
                           double* clamped_distance = nullptr);

struct TransportOptions {
  double cfl = 0.5;
  bool monotone_clip = true;  // clip interpolation to the 4x4 stencil range
  int substeps = 3;
};

// One semi-Lagrangian step; recomputes the stream function and velocity from
// the transported vorticity and the (conserved) circulations.
LakeState advect(const LakeState& state, double dt, const EllipticSolver& solver,
                 const IslandBasis& basis, const BathymetryField& b,
                 const TransportOptions& opts = {});

// Fixed-step loop with a record hook invoked at step 0, every
// record_interval steps and at the final step.
using RecordHook = std::function<void(const LakeState&, int step)>;
LakeState step_simulation(LakeState state, double dt, int n_steps,
                          const EllipticSolver& solver, const IslandBasis& basis,
                          const BathymetryField& b, const TransportOptions& opts,
                          int record_interval, const RecordHook& hook);

}  // namespace lake
