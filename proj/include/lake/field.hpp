// Grid-sampled scalar and vector fields with bicubic interpolation.
//
// Interpolation is tensor-product Catmull-Rom in grid coordinates (Cartesian
// or polar), which reproduces node values exactly.  The theta axis wraps
// periodically; the disk extends through the axis by reflection
// f(-r, theta) = f(r, theta + pi); other edges use one layer of quadratic
// extrapolation ghosts.  Optional monotone clipping limits the result to the
// local 4x4 stencil range.
#pragma once

#include "lake/bathymetry.hpp"
#include "lake/geometry.hpp"

#include <Eigen/Core>

namespace lake {

struct ScalarField {
  const Grid* grid = nullptr;
  Eigen::ArrayXd values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g)
      : grid(&g), values(Eigen::ArrayXd::Zero(g.node_count())) {}

  double& at(int i, int j) { return values[grid->node_id(i, j)]; }
  double at(int i, int j) const { return values[grid->node_id(i, j)]; }

  bool all_finite() const { return values.isFinite().all(); }
};

struct VelocityField {
  const Grid* grid = nullptr;
  Eigen::ArrayXd ux, uy;  // Cartesian components per node

  VelocityField() = default;
  explicit VelocityField(const Grid& g)
      : grid(&g),
        ux(Eigen::ArrayXd::Zero(g.node_count())),
        uy(Eigen::ArrayXd::Zero(g.node_count())) {}

  double max_speed() const {
    return std::sqrt((ux.square() + uy.square()).maxCoeff());
  }
};

// Build a field from a closed-form function of position.
template <typename F>
ScalarField sample_field(const Grid& g, F&& f) {
  ScalarField s(g);
  for (int id = 0; id < g.node_count(); ++id) s.values[id] = f(g.positions[id]);
  return s;
}

double interpolate(const ScalarField& f, const Vec2& p, bool clip = false);
Vec2 interpolate(const VelocityField& u, const Vec2& p);

// cell-measure quadrature of the field over the domain
double integrate(const ScalarField& f);
// quadrature of f * g
double integrate_product(const ScalarField& f, const ScalarField& g);

// Project a point back into the closed domain along the boundary normal.
// Returns the projected point; adds the displacement to *clamped_distance
// when the point was outside.
Vec2 clamp_into_domain(const DomainSpec& spec, const Vec2& p,
                       double* clamped_distance = nullptr);

}  // namespace lake
