// Weighted stream-function solves: -div(grad(psi)/b) = omega.
//
// Conservative second-order finite volumes on the structured grid, with 1/b
// averaged harmonically at faces so the assembled operator is symmetric in
// the cell-measure inner product.  Dirichlet rows are eliminated; boundary
// data enters the right-hand side.  Moderate systems use a sparse LDLT
// factorization (bitwise-reproducible backsolves); very large ones fall
// back to diagonally preconditioned conjugate gradients.  A solver instance
// is immutable after construction and shareable across threads.
#pragma once

#include "lake/field.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>
#include <optional>
#include <vector>

namespace lake {

struct IslandBasis {
  std::vector<ScalarField> phi;  // Kronecker boundary data solutions
  std::vector<ScalarField> psi;  // unit-flux island stream functions
  Eigen::MatrixXd D;             // Gram matrix of grad(phi_i).grad(phi_j)/b
  Eigen::MatrixXd D_inv;

  int count() const { return static_cast<int>(phi.size()); }
};

class EllipticSolver {
 public:
  // systems up to direct_limit unknowns are factorized once; larger ones
  // fall back to preconditioned conjugate gradients
  EllipticSolver(const Grid& grid, const BathymetryField& bathymetry,
                 double tolerance = 1e-10, int direct_limit = 500000);

  const Grid& grid() const { return *grid_; }
  const BathymetryField& bathymetry() const { return *bathymetry_; }
  double tolerance() const { return tolerance_; }
  int unknowns() const { return static_cast<int>(interior_.size()); }
  bool uses_direct_factorization() const { return direct_; }

  // solve with homogeneous Dirichlet data
  ScalarField solve_dirichlet(const ScalarField& omega,
                              const ScalarField* guess = nullptr) const;

  // solve with prescribed values on boundary components: values[c] applies
  // to island c, outer_value to the outer boundary
  ScalarField solve_with_boundary(const ScalarField& omega,
                                  const std::vector<double>& island_values,
                                  double outer_value) const;

  // Discrete weighted flux of psi through the boundary of island i (the
  // conserved circulation).  The face-ring flux sits half a cell off the
  // island, so the source mass held by the boundary half-cells is folded
  // back in; omega may be null for source-free fields.
  double island_flux(const ScalarField& psi, int island,
                     const ScalarField* omega = nullptr) const;

  // discrete Dirichlet form  sum_faces t * (df) * (dg)  approximating
  // the integral of grad(f).grad(g)/b
  double dirichlet_form(const ScalarField& f, const ScalarField& g) const;

  // relative residual |M x - rhs| / |rhs| of a previously returned solution
  double residual(const ScalarField& omega, const ScalarField& psi) const;

 private:

  Eigen::VectorXd assemble_rhs(const ScalarField& omega,
                               const Eigen::ArrayXd& boundary_values) const;
  ScalarField run_solve(const Eigen::VectorXd& rhs,
                        const Eigen::ArrayXd& boundary_values,
                        const ScalarField* guess) const;

  const Grid* grid_;
  const BathymetryField* bathymetry_;
  double tolerance_;

  struct Face {
    int p, q;   // node ids; q > p side convention is not required
    double t;   // transmissibility beta_face * face_length / node_distance
  };
  std::vector<Face> faces_;
  std::vector<std::vector<Face>> island_faces_;  // Face.p is the island node

  std::vector<int> interior_;    // unknown index -> node id
  std::vector<int> unknown_of_;  // node id -> unknown index or -1

  using SpMat = Eigen::SparseMatrix<double>;
  using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  SpMat M_;
  SpMatRow M_row_;  // only populated on the iterative path
  bool direct_ = true;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::ConjugateGradient<SpMatRow, Eigen::Lower | Eigen::Upper,
                                           Eigen::DiagonalPreconditioner<double>>>
      cg_;
};

// Harmonic basis for the islands; empty basis when the domain has none.
IslandBasis island_basis(const EllipticSolver& solver);

// Full stream assembly: psi solves the weighted problem with prescribed
// island circulations.  For a simply connected domain this is exactly the
// Dirichlet solve.
ScalarField assemble_stream(const EllipticSolver& solver, const IslandBasis& basis,
                            const ScalarField& omega,
                            const Eigen::VectorXd& circulations,
                            const ScalarField* guess = nullptr);

// Column of the weighted Green function: response to a discrete delta at
// the cell containing y.  Requires y at least two cells from the boundary.
ScalarField greens_sample(const EllipticSolver& solver, const Vec2& y);

}  // namespace lake
