// Integral diagnostics of a lake state: circulation, total vorticity,
// energy, the concentration scale rho, the logarithmic rearrangement norm,
// centers of vorticity and confinement measures.
#pragma once

#include "lake/transport.hpp"

#include <array>
#include <string>
#include <vector>

namespace lake {

double circulation(const ScalarField& omega);
double total_vorticity(const ScalarField& omega, const BathymetryField& b);

// rho = exp(-4 pi E / (Gamma Omega)); requires Gamma * Omega > 0
double typical_scale(double E, double Gamma, double Omega);

// Rearrangement norm: integral of (ln 1/|x|)_+ against the radially
// decreasing rearrangement of |omega|, computed exactly for the
// piecewise-constant (one atom per cell) representation.
double lorentz_norm(const ScalarField& omega);

// norm of the rescaled field x -> omega(rho x); level-set measures scale by
// rho^-2, no resampling involved
double lorentz_norm_rescaled(const ScalarField& omega, double rho);

// Lebesgue measure of {|omega| > lambda}
double level_measure(const ScalarField& omega, double lambda);
// b-weighted measure of {omega/b > lambda}, the quantity the flow preserves
double weighted_level_measure(const ScalarField& omega, const BathymetryField& b,
                              double lambda);

Vec2 center_of_vorticity(const ScalarField& omega);
// center against a boundary cutoff, still normalized by the full circulation
Vec2 truncated_center(const ScalarField& omega, const ScalarField& eta);

// quintic-smoothstep cutoff of distance to the boundary: 0 within delta/3,
// 1 beyond 2 delta/3
ScalarField boundary_cutoff(const Grid& grid, double delta);

double mass_outside(const ScalarField& omega, const Vec2& center, double radius);

// integral of omega * ln(1 + diam(D) / (rho + dist(x, boundary)))
double confinement_functional(const ScalarField& omega, double rho);

struct DiagnosticsRecord {
  double t = 0.0;
  double s = 0.0;  // rescaled time E0 t / Gamma0
  double Gamma = 0.0;
  double Omega = 0.0;
  double E = 0.0;
  double rho = 0.0;
  double lorentz = 0.0;
  Vec2 q = Vec2::Zero();
  bool q_truncated = false;
  std::array<double, 4> mass_outside{};  // at radii {2,4,8,16} * rho
  double confinement = 0.0;
  double boundary_flux = 0.0;
};

inline constexpr std::array<double, 4> kMassRadii = {2.0, 4.0, 8.0, 16.0};

struct DiagnosticsContext {
  const Grid* grid = nullptr;
  const BathymetryField* b = nullptr;
  double E0 = 1.0;
  double Gamma0 = 1.0;
  double delta = 0.2;
  ScalarField eta;            // boundary cutoff sampled on the grid
  Eigen::ArrayXd node_dist;   // distance to boundary per node
};

DiagnosticsContext make_diagnostics_context(const Grid& grid,
                                            const BathymetryField& b, double delta,
                                            double E0, double Gamma0);

// Full record of one time slice.  The recorded center is the truncated one
// whenever any vorticity mass lies within delta of the boundary.
DiagnosticsRecord make_record(const LakeState& state,
                              const DiagnosticsContext& ctx);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);
std::vector<DiagnosticsRecord> parse_csv(const std::string& text);

}  // namespace lake
