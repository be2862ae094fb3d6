#include "lake/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace lake {

double circulation(const ScalarField& omega) { return integrate(omega); }

double total_vorticity(const ScalarField& omega, const BathymetryField& b) {
  const Grid& g = *omega.grid;
  double s = 0.0;
  for (int id = 0; id < g.node_count(); ++id)
    s += omega.values[id] * b.depth(g.positions[id]) * g.measures[id];
  return s;
}

double typical_scale(double E, double Gamma, double Omega) {
  if (!(Gamma * Omega > 0.0))
    throw std::invalid_argument("typical_scale: Gamma * Omega must be positive");
  return std::exp(-4.0 * M_PI * E / (Gamma * Omega));
}

namespace {

// 2 pi * integral of r (ln 1/r)_+ over (0, min(R,1))
inline double log_kernel_mass(double R) {
  double r = std::min(R, 1.0);
  if (r <= 0.0) return 0.0;
  return M_PI * r * r * (std::log(1.0 / r) + 0.5);
}

// Exact rearrangement integral for atoms (value, measure), measures scaled
// by 1/scale2 (rescaling the domain by sigma multiplies measures by
// sigma^-2).
double lorentz_from_atoms(const ScalarField& omega, double scale2) {
  const Grid& g = *omega.grid;
  std::vector<int> order;
  order.reserve(g.node_count());
  for (int id = 0; id < g.node_count(); ++id)
    if (omega.values[id] != 0.0) order.push_back(id);
  std::sort(order.begin(), order.end(), [&](int a, int c) {
    double va = std::abs(omega.values[a]), vc = std::abs(omega.values[c]);
    if (va != vc) return va > vc;
    return a < c;
  });

  double total = 0.0, cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum += g.measures[order[k]] / scale2;
    double v = std::abs(omega.values[order[k]]);
    double v_next =
        k + 1 < order.size() ? std::abs(omega.values[order[k + 1]]) : 0.0;
    if (v > v_next) total += (v - v_next) * log_kernel_mass(std::sqrt(cum / M_PI));
  }
  return total;
}

}  // namespace

double lorentz_norm(const ScalarField& omega) {
  return lorentz_from_atoms(omega, 1.0);
}

double lorentz_norm_rescaled(const ScalarField& omega, double rho) {
  if (!(rho > 0.0))
    throw std::invalid_argument("lorentz_norm_rescaled: rho must be positive");
  return lorentz_from_atoms(omega, rho * rho);
}

double level_measure(const ScalarField& omega, double lambda) {
  const Grid& g = *omega.grid;
  double s = 0.0;
  for (int id = 0; id < g.node_count(); ++id)
    if (std::abs(omega.values[id]) > lambda) s += g.measures[id];
  return s;
}

double weighted_level_measure(const ScalarField& omega, const BathymetryField& b,
                              double lambda) {
  const Grid& g = *omega.grid;
  double s = 0.0;
  for (int id = 0; id < g.node_count(); ++id) {
    double depth = b.depth(g.positions[id]);
    if (omega.values[id] / depth > lambda) s += depth * g.measures[id];
  }
  return s;
}

Vec2 center_of_vorticity(const ScalarField& omega) {
  double gamma = circulation(omega);
  if (gamma == 0.0)
    throw std::invalid_argument("center_of_vorticity: zero circulation");
  const Grid& g = *omega.grid;
  Vec2 q = Vec2::Zero();
  for (int id = 0; id < g.node_count(); ++id)
    q += g.positions[id] * omega.values[id] * g.measures[id];
  return q / gamma;
}

Vec2 truncated_center(const ScalarField& omega, const ScalarField& eta) {
  double gamma = circulation(omega);
  if (gamma == 0.0)
    throw std::invalid_argument("truncated_center: zero circulation");
  const Grid& g = *omega.grid;
  Vec2 q = Vec2::Zero();
  for (int id = 0; id < g.node_count(); ++id)
    q += g.positions[id] * eta.values[id] * omega.values[id] * g.measures[id];
  return q / gamma;
}

ScalarField boundary_cutoff(const Grid& grid, double delta) {
  ScalarField eta(grid);
  for (int id = 0; id < grid.node_count(); ++id) {
    double d = distance_to_boundary(grid.domain, grid.positions[id]);
    double u = std::clamp((d - delta / 3.0) / (delta / 3.0), 0.0, 1.0);
    eta.values[id] = u * u * u * (u * (6.0 * u - 15.0) + 10.0);
  }
  return eta;
}

double mass_outside(const ScalarField& omega, const Vec2& center, double radius) {
  const Grid& g = *omega.grid;
  double s = 0.0;
  for (int id = 0; id < g.node_count(); ++id)
    if ((g.positions[id] - center).norm() > radius)
      s += omega.values[id] * g.measures[id];
  return s;
}

double confinement_functional(const ScalarField& omega, double rho) {
  const Grid& g = *omega.grid;
  const double diam = g.domain.diameter();
  double s = 0.0;
  for (int id = 0; id < g.node_count(); ++id) {
    if (omega.values[id] == 0.0) continue;
    double d = distance_to_boundary(g.domain, g.positions[id]);
    s += omega.values[id] * std::log1p(diam / (rho + d)) * g.measures[id];
  }
  return s;
}

DiagnosticsContext make_diagnostics_context(const Grid& grid,
                                            const BathymetryField& b, double delta,
                                            double E0, double Gamma0) {
  DiagnosticsContext ctx;
  ctx.grid = &grid;
  ctx.b = &b;
  ctx.E0 = E0;
  ctx.Gamma0 = Gamma0;
  ctx.delta = delta;
  ctx.eta = boundary_cutoff(grid, delta);
  ctx.node_dist.resize(grid.node_count());
  for (int id = 0; id < grid.node_count(); ++id)
    ctx.node_dist[id] = distance_to_boundary(grid.domain, grid.positions[id]);
  return ctx;
}

DiagnosticsRecord make_record(const LakeState& state,
                              const DiagnosticsContext& ctx) {
  const Grid& g = *ctx.grid;
  DiagnosticsRecord r;
  r.t = state.t;
  r.s = ctx.E0 * state.t / ctx.Gamma0;
  r.Gamma = circulation(state.omega);
  r.Omega = total_vorticity(state.omega, *ctx.b);
  r.E = kinetic_energy(state.u, *ctx.b);
  r.rho = typical_scale(r.E, r.Gamma, r.Omega);
  r.lorentz = lorentz_norm(state.omega);

  // truncated center whenever any vorticity mass sits within delta of the
  // boundary
  double near = 0.0, total = 0.0;
  for (int id = 0; id < g.node_count(); ++id) {
    double w = std::abs(state.omega.values[id]) * g.measures[id];
    total += w;
    if (ctx.node_dist[id] < ctx.delta) near += w;
  }
  r.q_truncated = near > 1e-10 * total;
  r.q = r.q_truncated ? truncated_center(state.omega, ctx.eta)
                      : center_of_vorticity(state.omega);

  for (std::size_t k = 0; k < kMassRadii.size(); ++k)
    r.mass_outside[k] = mass_outside(state.omega, r.q, kMassRadii[k] * r.rho);
  r.confinement = confinement_functional(state.omega, r.rho);
  r.boundary_flux = max_boundary_flux(state.u);
  return r;
}

std::string csv_header() {
  return "t,s,Gamma,Omega,E,rho,lorentz,q_x,q_y,mass_r2,mass_r4,mass_r8,"
         "mass_r16,confinement,boundary_flux";
}

std::string csv_row(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%.17g,%.17g,%.17g,%.17g,%.17g",
                r.t, r.s, r.Gamma, r.Omega, r.E, r.rho, r.lorentz, r.q.x(),
                r.q.y(), r.mass_outside[0], r.mass_outside[1], r.mass_outside[2],
                r.mass_outside[3], r.confinement, r.boundary_flux);
  return buf;
}

std::vector<DiagnosticsRecord> parse_csv(const std::string& text) {
  std::vector<DiagnosticsRecord> records;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return records;
  if (line != csv_header())
    throw std::invalid_argument("records csv: unexpected header '" + line + "'");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    DiagnosticsRecord r;
    double qx, qy;
    int n = std::sscanf(line.c_str(),
                        "%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,"
                        "%lg,%lg",
                        &r.t, &r.s, &r.Gamma, &r.Omega, &r.E, &r.rho, &r.lorentz,
                        &qx, &qy, &r.mass_outside[0], &r.mass_outside[1],
                        &r.mass_outside[2], &r.mass_outside[3], &r.confinement,
                        &r.boundary_flux);
    if (n != 15)
      throw std::invalid_argument("records csv: malformed line " +
                                  std::to_string(lineno));
    r.q = Vec2(qx, qy);
    records.push_back(r);
  }
  return records;
}

}  // namespace lake
