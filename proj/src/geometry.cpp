#include "lake/geometry.hpp"

#include <cmath>

namespace lake {

DomainSpec DomainSpec::unit_disk() {
  DomainSpec s;
  s.kind = DomainKind::UnitDisk;
  return s;
}

DomainSpec DomainSpec::rectangle(double width, double height) {
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("Rectangle: width and height must be positive");
  DomainSpec s;
  s.kind = DomainKind::Rectangle;
  s.width = width;
  s.height = height;
  return s;
}

DomainSpec DomainSpec::annulus(double inner_radius) {
  if (!(inner_radius > 0.0) || !(inner_radius < 1.0))
    throw std::invalid_argument("Annulus: inner radius must lie in (0,1)");
  DomainSpec s;
  s.kind = DomainKind::Annulus;
  s.inner_radius = inner_radius;
  return s;
}

double DomainSpec::diameter() const {
  switch (kind) {
    case DomainKind::UnitDisk:
    case DomainKind::Annulus:
      return 2.0;
    case DomainKind::Rectangle:
      return std::hypot(width, height);
  }
  return 0.0;
}

double DomainSpec::area() const {
  switch (kind) {
    case DomainKind::UnitDisk:
      return M_PI;
    case DomainKind::Rectangle:
      return width * height;
    case DomainKind::Annulus:
      return M_PI * (1.0 - inner_radius * inner_radius);
  }
  return 0.0;
}

bool DomainSpec::contains(const Vec2& p, double tol) const {
  switch (kind) {
    case DomainKind::UnitDisk:
      return p.norm() <= 1.0 + tol;
    case DomainKind::Rectangle:
      return std::abs(p.x()) <= 0.5 * width + tol &&
             std::abs(p.y()) <= 0.5 * height + tol;
    case DomainKind::Annulus: {
      double r = p.norm();
      return r >= inner_radius - tol && r <= 1.0 + tol;
    }
  }
  return false;
}

double distance_to_boundary(const DomainSpec& spec, const Vec2& p) {
  if (!spec.contains(p))
    throw std::invalid_argument("distance_to_boundary: point outside domain");
  switch (spec.kind) {
    case DomainKind::UnitDisk:
      return std::max(0.0, 1.0 - p.norm());
    case DomainKind::Rectangle:
      return std::max(0.0, std::min(0.5 * spec.width - std::abs(p.x()),
                                    0.5 * spec.height - std::abs(p.y())));
    case DomainKind::Annulus: {
      double r = p.norm();
      return std::max(0.0, std::min(r - spec.inner_radius, 1.0 - r));
    }
  }
  return 0.0;
}

Vec2 outward_normal(const DomainSpec& spec, const Vec2& p) {
  switch (spec.kind) {
    case DomainKind::UnitDisk:
      return p.normalized();
    case DomainKind::Annulus: {
      double r = p.norm();
      // nearest component: outer circle or the island
      if (1.0 - r <= r - spec.inner_radius) return p.normalized();
      return -p.normalized();
    }
    case DomainKind::Rectangle: {
      double dx = 0.5 * spec.width - std::abs(p.x());
      double dy = 0.5 * spec.height - std::abs(p.y());
      if (dx <= dy) return Vec2(p.x() >= 0 ? 1.0 : -1.0, 0.0);
      return Vec2(0.0, p.y() >= 0 ? 1.0 : -1.0);
    }
  }
  return Vec2::Zero();
}

namespace {

Grid build_cartesian(const DomainSpec& spec, int res1, int res2) {
  Grid g;
  g.domain = spec;
  g.kind = GridKind::Cartesian;
  g.n1 = res1 + 1;
  g.n2 = res2 + 1;
  g.h1 = spec.width / res1;
  g.h2 = spec.height / res2;
  g.a1 = -0.5 * spec.width;
  g.a2 = -0.5 * spec.height;

  const int n = g.n1 * g.n2;
  g.positions.resize(n);
  g.measures.resize(n);
  g.tags.assign(n, BoundaryTag::Interior);
  for (int i = 0; i < g.n1; ++i) {
    double wx = (i == 0 || i == g.n1 - 1) ? 0.5 * g.h1 : g.h1;
    for (int j = 0; j < g.n2; ++j) {
      double wy = (j == 0 || j == g.n2 - 1) ? 0.5 * g.h2 : g.h2;
      int id = g.node_id(i, j);
      g.positions[id] = Vec2(g.coord1(i), g.coord2(j));
      g.measures[id] = wx * wy;
      if (i == 0 || i == g.n1 - 1 || j == 0 || j == g.n2 - 1)
        g.tags[id] = BoundaryTag::OuterBoundary;
    }
  }
  return g;
}

Grid build_polar(const DomainSpec& spec, int res_r, int res_t) {
  if (res_t % 2 != 0)
    throw std::invalid_argument("build_grid: polar grids need an even theta count");
  const bool disk = spec.kind == DomainKind::UnitDisk;
  const double r0 = disk ? 0.0 : spec.inner_radius;
  Grid g;
  g.domain = spec;
  g.kind = disk ? GridKind::PolarDisk : GridKind::PolarAnnulus;
  g.n1 = res_r + 1;
  g.n2 = res_t;
  g.h1 = (1.0 - r0) / res_r;
  g.h2 = 2.0 * M_PI / res_t;
  g.a1 = r0;
  g.a2 = 0.0;

  const int n = disk ? 1 + res_r * res_t : (res_r + 1) * res_t;
  g.positions.resize(n);
  g.measures.resize(n);
  g.tags.assign(n, BoundaryTag::Interior);

  auto ring_measure = [&](int i) {
    // exact area of the annular sector [r_i - h/2, r_i + h/2] x h_theta,
    // trimmed to the domain at the first and last ring
    double r = g.coord1(i);
    double lo = std::max(r0, r - 0.5 * g.h1);
    double hi = std::min(1.0, r + 0.5 * g.h1);
    return 0.5 * (hi * hi - lo * lo) * g.h2;
  };

  if (disk) {
    g.positions[0] = Vec2(0.0, 0.0);
    g.measures[0] = M_PI * 0.25 * g.h1 * g.h1;
    for (int i = 1; i <= res_r; ++i) {
      double r = g.coord1(i);
      for (int j = 0; j < res_t; ++j) {
        int id = g.node_id(i, j);
        double t = g.coord2(j);
        g.positions[id] = Vec2(r * std::cos(t), r * std::sin(t));
        g.measures[id] = ring_measure(i);
        if (i == res_r) g.tags[id] = BoundaryTag::OuterBoundary;
      }
    }
  } else {
    for (int i = 0; i <= res_r; ++i) {
      double r = g.coord1(i);
      for (int j = 0; j < res_t; ++j) {
        int id = g.node_id(i, j);
        double t = g.coord2(j);
        g.positions[id] = Vec2(r * std::cos(t), r * std::sin(t));
        g.measures[id] = ring_measure(i);
        if (i == 0)
          g.tags[id] = static_cast<BoundaryTag>(0);  // island 0
        else if (i == res_r)
          g.tags[id] = BoundaryTag::OuterBoundary;
      }
    }
  }
  return g;
}

}  // namespace

Grid build_grid(const DomainSpec& spec, int res1, int res2) {
  if (res1 < 8 || res2 < 8)
    throw std::invalid_argument("build_grid: resolution must be >= 8 per axis");
  if (spec.kind == DomainKind::Annulus &&
      !(spec.inner_radius > 0.0 && spec.inner_radius < 1.0))
    throw std::invalid_argument("build_grid: annulus inner radius not in (0,1)");
  if (spec.kind == DomainKind::Rectangle) return build_cartesian(spec, res1, res2);
  return build_polar(spec, res1, res2);
}

double Grid::cfl_spacing() const {
  switch (kind) {
    case GridKind::Cartesian:
      return std::min(h1, h2);
    case GridKind::PolarDisk:
      return std::min(h1, h2 * 1.0);
    case GridKind::PolarAnnulus:
      return std::min(h1, h2 * domain.inner_radius);
  }
  return h1;
}

double Grid::local_spacing(const Vec2& p) const {
  if (kind == GridKind::Cartesian) return std::max(h1, h2);
  double r = std::max(p.norm(), h1);
  return std::max(h1, r * h2);
}

}  // namespace lake
