#include "lake/velocity.hpp"

#include <cmath>

namespace lake {

namespace {

// One-dimensional index derivatives: centered in the interior, cubic
// one-sided at non-periodic edges.  The second-order one-sided form leaves
// an O(h^2) defect in wall-tangential speeds that is too large for the
// island circulation quadrature, so the edge rows use one extra point.
double d1(const ScalarField& f, int i, int j, double h) {
  const int last = f.grid->n1 - 1;
  if (i == 0)
    return (-11.0 * f.at(0, j) + 18.0 * f.at(1, j) - 9.0 * f.at(2, j) +
            2.0 * f.at(3, j)) /
           (6.0 * h);
  if (i == last)
    return (11.0 * f.at(last, j) - 18.0 * f.at(last - 1, j) +
            9.0 * f.at(last - 2, j) - 2.0 * f.at(last - 3, j)) /
           (6.0 * h);
  return (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
}

double d2(const ScalarField& f, int i, int j, double h) {
  const Grid& g = *f.grid;
  if (g.periodic2()) return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h);
  const int last = g.n2 - 1;
  if (j == 0)
    return (-11.0 * f.at(i, 0) + 18.0 * f.at(i, 1) - 9.0 * f.at(i, 2) +
            2.0 * f.at(i, 3)) /
           (6.0 * h);
  if (j == last)
    return (11.0 * f.at(i, last) - 18.0 * f.at(i, last - 1) +
            9.0 * f.at(i, last - 2) - 2.0 * f.at(i, last - 3)) /
           (6.0 * h);
  return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h);
}

// Cartesian gradient at the collapsed disk center from the first ring
Vec2 center_gradient(const ScalarField& f) {
  const Grid& g = *f.grid;
  double c = f.values[0];
  double gx = 0.0, gy = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    double t = g.coord2(j);
    double df = f.at(1, j) - c;
    gx += df * std::cos(t);
    gy += df * std::sin(t);
  }
  double scale = 2.0 / (g.n2 * g.h1);
  return Vec2(gx * scale, gy * scale);
}

// Cartesian gradient of a node field at (i, j)
Vec2 node_gradient(const ScalarField& f, int i, int j) {
  const Grid& g = *f.grid;
  if (g.kind == GridKind::Cartesian)
    return Vec2(d1(f, i, j, g.h1), d2(f, i, j, g.h2));
  if (g.kind == GridKind::PolarDisk && i == 0) return center_gradient(f);
  double r = g.coord1(i);
  double t = g.coord2(j);
  double fr = d1(f, i, j, g.h1);
  double ft = d2(f, i, j, g.h2) / r;
  double ct = std::cos(t), st = std::sin(t);
  return Vec2(fr * ct - ft * st, fr * st + ft * ct);
}

template <typename Fn>
void for_each_node(const Grid& g, Fn&& fn) {
  if (g.kind == GridKind::Cartesian) {
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) fn(i, j, g.node_id(i, j));
    return;
  }
  if (g.kind == GridKind::PolarDisk) {
    fn(0, 0, 0);
    for (int i = 1; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) fn(i, j, g.node_id(i, j));
    return;
  }
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) fn(i, j, g.node_id(i, j));
}

}  // namespace

VelocityField velocity_from_stream(const ScalarField& psi,
                                   const BathymetryField& b) {
  const Grid& g = *psi.grid;
  VelocityField u(g);
  for_each_node(g, [&](int i, int j, int id) {
    Vec2 grad = node_gradient(psi, i, j);
    double depth = b.depth(g.positions[id]);
    u.ux[id] = grad.y() / depth;
    u.uy[id] = -grad.x() / depth;
  });
  return u;
}

ScalarField divergence_weighted(const VelocityField& u, const BathymetryField& b) {
  const Grid& g = *u.grid;
  ScalarField div(g);

  if (g.kind == GridKind::Cartesian) {
    ScalarField bx(g), by(g);
    for (int id = 0; id < g.node_count(); ++id) {
      double depth = b.depth(g.positions[id]);
      bx.values[id] = depth * u.ux[id];
      by.values[id] = depth * u.uy[id];
    }
    for_each_node(g, [&](int i, int j, int id) {
      div.values[id] = d1(bx, i, j, g.h1) + d2(by, i, j, g.h2);
    });
    return div;
  }

  // polar: (1/r) d(r b u_r)/dr + (1/r) d(b u_t)/dtheta
  ScalarField rbur(g), but(g), bux(g), buy(g);
  for_each_node(g, [&](int i, int j, int id) {
    double depth = b.depth(g.positions[id]);
    double t = g.coord2(j);
    double ct = std::cos(t), st = std::sin(t);
    double ur = u.ux[id] * ct + u.uy[id] * st;
    double ut = -u.ux[id] * st + u.uy[id] * ct;
    double r = (g.kind == GridKind::PolarDisk && i == 0) ? 0.0 : g.coord1(i);
    rbur.values[id] = r * depth * ur;
    but.values[id] = depth * ut;
    bux.values[id] = depth * u.ux[id];
    buy.values[id] = depth * u.uy[id];
  });
  for_each_node(g, [&](int i, int j, int id) {
    if (g.kind == GridKind::PolarDisk && i == 0) {
      div.values[id] = center_gradient(bux).x() + center_gradient(buy).y();
      return;
    }
    double r = g.coord1(i);
    div.values[id] = (d1(rbur, i, j, g.h1) + d2(but, i, j, g.h2)) / r;
  });
  return div;
}

ScalarField discrete_curl(const VelocityField& u) {
  const Grid& g = *u.grid;
  ScalarField sx, sy;
  sx.grid = sy.grid = &g;
  sx.values = u.ux;
  sy.values = u.uy;
  ScalarField curl(g);
  for_each_node(g, [&](int i, int j, int id) {
    if (g.kind == GridKind::PolarDisk && i == 0) {
      curl.values[id] = center_gradient(sy).x() - center_gradient(sx).y();
      return;
    }
    curl.values[id] = node_gradient(sy, i, j).x() - node_gradient(sx, i, j).y();
  });
  return curl;
}

double circulation_island(const VelocityField& u, const BathymetryField& b,
                          int island) {
  const Grid& g = *u.grid;
  if (island < 0 || island >= g.domain.island_count())
    throw std::out_of_range("circulation_island: island index out of range");
  // the single supported island is the annulus inner circle, ring i = 0
  double r = g.a1;
  double sum = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    int id = g.node_id(0, j);
    double t = g.coord2(j);
    Vec2 tangent(-std::sin(t), std::cos(t));  // counterclockwise
    double ut = u.ux[id] * tangent.x() + u.uy[id] * tangent.y();
    sum += ut / b.depth(g.positions[id]);
  }
  return sum * r * g.h2;
}

double max_boundary_flux(const VelocityField& u) {
  const Grid& g = *u.grid;
  double worst = 0.0;
  if (g.kind == GridKind::Cartesian) {
    for_each_node(g, [&](int i, int j, int id) {
      if (g.tags[id] == BoundaryTag::Interior) return;
      if (i == 0 || i == g.n1 - 1) worst = std::max(worst, std::abs(u.ux[id]));
      if (j == 0 || j == g.n2 - 1) worst = std::max(worst, std::abs(u.uy[id]));
    });
    return worst;
  }
  for_each_node(g, [&](int i, int j, int id) {
    if (g.tags[id] == BoundaryTag::Interior) return;
    double t = g.coord2(j);
    double un = u.ux[id] * std::cos(t) + u.uy[id] * std::sin(t);
    worst = std::max(worst, std::abs(un));
  });
  return worst;
}

double kinetic_energy(const VelocityField& u, const BathymetryField& b) {
  const Grid& g = *u.grid;
  double e = 0.0;
  for (int id = 0; id < g.node_count(); ++id) {
    double speed2 = u.ux[id] * u.ux[id] + u.uy[id] * u.uy[id];
    e += 0.5 * speed2 * b.depth(g.positions[id]) * g.measures[id];
  }
  return e;
}

double kinetic_energy_vortex(const EllipticSolver& solver, const IslandBasis& basis,
                             const ScalarField& omega,
                             const Eigen::VectorXd& circulations) {
  const int m = solver.grid().domain.island_count();
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  ScalarField k_omega = assemble_stream(solver, basis, omega, zero);
  double e = 0.5 * integrate_product(omega, k_omega);
  for (int i = 0; i < m; ++i)
    e += circulations[i] * integrate_product(omega, basis.psi[i]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      e += 0.5 * circulations[i] * circulations[j] * basis.D_inv(i, j);
  return e;
}

}  // namespace lake
