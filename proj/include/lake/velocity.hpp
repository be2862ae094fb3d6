// Velocity reconstruction u = perp(grad psi)/b and contour/flux measurements.
#pragma once

#include "lake/elliptic.hpp"
#include "lake/field.hpp"

namespace lake {

// Centered second-order differences (one-sided at non-periodic edges); the
// collapsed disk axis gets its Cartesian gradient from a first-ring Fourier
// fit.
VelocityField velocity_from_stream(const ScalarField& psi,
                                   const BathymetryField& b);

// discrete div(b u); of order h^2 for reconstructed velocities
ScalarField divergence_weighted(const VelocityField& u, const BathymetryField& b);

// discrete curl d(u2)/dx1 - d(u1)/dx2
ScalarField discrete_curl(const VelocityField& u);

// Trapezoid quadrature of u.tangent/b along the island contour, traversed
// counterclockwise; equals the island circulation for reconstructed fields.
double circulation_island(const VelocityField& u, const BathymetryField& b,
                          int island);

// max over boundary nodes of |u . outward normal|
double max_boundary_flux(const VelocityField& u);

// flow-side kinetic energy  (1/2) integral |u|^2 b
double kinetic_energy(const VelocityField& u, const BathymetryField& b);

// vorticity-side kinetic energy
//   (1/2) <omega, K_b omega> + sum_i G_i <omega, psi_i>
//   + (1/2) sum_ij G_i G_j D^-1_ij
// where K_b omega is the zero-circulation stream of omega
double kinetic_energy_vortex(const EllipticSolver& solver, const IslandBasis& basis,
                             const ScalarField& omega,
                             const Eigen::VectorXd& circulations);

}  // namespace lake
