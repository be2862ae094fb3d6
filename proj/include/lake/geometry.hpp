// Domains, structured grids and boundary queries.
//
// Three analytic domain families are supported: the unit disk, an
// axis-aligned rectangle centered at the origin, and the annulus a < r < 1
// (one island).  Grids are logically rectangular: Cartesian on the
// rectangle, polar (r, theta) with periodic theta on the disk and annulus.
// All objects here are immutable after construction and safe to share
// across threads.
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace lake {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { UnitDisk, Rectangle, Annulus };

struct DomainSpec {
  DomainKind kind = DomainKind::UnitDisk;
  double width = 2.0;         // Rectangle only
  double height = 1.0;        // Rectangle only
  double inner_radius = 0.3;  // Annulus only

  int island_count() const { return kind == DomainKind::Annulus ? 1 : 0; }
  double diameter() const;
  double area() const;
  bool contains(const Vec2& p, double tol = 1e-12) const;

  static DomainSpec unit_disk();
  static DomainSpec rectangle(double width, double height);
  static DomainSpec annulus(double inner_radius);
};

enum class BoundaryTag : int {
  Interior = -2,
  OuterBoundary = -1,
  // island indices are >= 0
};

enum class GridKind { Cartesian, PolarDisk, PolarAnnulus };

// Node-centered structured grid.  Axis 1 is x (Cartesian) or r (polar),
// axis 2 is y or theta.  On the disk the r = 0 ring collapses to a single
// center node with id 0.
struct Grid {
  DomainSpec domain;
  GridKind kind = GridKind::Cartesian;
  int n1 = 0;  // node count along axis 1 (includes boundaries)
  int n2 = 0;  // node count along axis 2 (theta is periodic: n2 = cell count)
  double h1 = 0.0, h2 = 0.0;
  double a1 = 0.0, a2 = 0.0;  // axis origins: (x_min, y_min) or (r_min, 0)

  std::vector<Vec2> positions;      // per node id, physical coordinates
  Eigen::VectorXd measures;         // per node id, cell area weights
  std::vector<BoundaryTag> tags;    // per node id

  int node_count() const { return static_cast<int>(positions.size()); }

  int node_id(int i, int j) const {
    switch (kind) {
      case GridKind::Cartesian:
        return i * n2 + j;
      case GridKind::PolarDisk:
        return i == 0 ? 0 : 1 + (i - 1) * n2 + wrap2(j);
      case GridKind::PolarAnnulus:
        return i * n2 + wrap2(j);
    }
    return -1;
  }

  int wrap2(int j) const {
    if (kind == GridKind::Cartesian) return j;
    j %= n2;
    return j < 0 ? j + n2 : j;
  }

  bool periodic2() const { return kind != GridKind::Cartesian; }

  // axis coordinates of node indices
  double coord1(int i) const { return a1 + i * h1; }
  double coord2(int j) const { return a2 + j * h2; }

  // Smallest physical node spacing relevant for advective time-step limits.
  // On polar grids the azimuthal spacing is measured where it matters: the
  // innermost positive radius for the annulus and the outer radius for the
  // disk (near the axis the azimuthal spacing shrinks with r together with
  // the field's azimuthal variation, so it does not restrict the step).
  double cfl_spacing() const;

  // largest local node spacing around a point, used for resolution checks
  double local_spacing(const Vec2& p) const;

  double total_measure() const { return measures.sum(); }
};

// resolution = per-axis cell counts; polar grids require an even theta count
Grid build_grid(const DomainSpec& spec, int res1, int res2);

// Exact Euclidean distance to the domain boundary.  Throws if the point
// lies outside the closed domain.
double distance_to_boundary(const DomainSpec& spec, const Vec2& p);

// Outward unit normal of the boundary component nearest to a boundary
// point (outward with respect to the fluid domain).
Vec2 outward_normal(const DomainSpec& spec, const Vec2& p);

}  // namespace lake
