#include "lake/elliptic.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace lake {

namespace {

inline double face_beta(const BathymetryField& b, const Vec2& p, const Vec2& q) {
  // harmonic average of 1/b between the two node values
  return 2.0 / (b.depth(p) + b.depth(q));
}

}  // namespace

EllipticSolver::EllipticSolver(const Grid& grid, const BathymetryField& bathymetry,
                               double tolerance, int direct_limit)
    : grid_(&grid), bathymetry_(&bathymetry), tolerance_(tolerance) {
  validate_positive_depth(bathymetry, grid);
  const Grid& g = grid;
  const BathymetryField& b = bathymetry;
  island_faces_.resize(g.domain.island_count());

  auto add_face = [&](int p, int q, double t) {
    faces_.push_back({p, q, t});
    BoundaryTag tp = g.tags[p], tq = g.tags[q];
    if (tp >= static_cast<BoundaryTag>(0))
      island_faces_[static_cast<int>(tp)].push_back({p, q, t});
    else if (tq >= static_cast<BoundaryTag>(0))
      island_faces_[static_cast<int>(tq)].push_back({q, p, t});
  };

  if (g.kind == GridKind::Cartesian) {
    for (int i = 0; i + 1 < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        int p = g.node_id(i, j), q = g.node_id(i + 1, j);
        double len = (j == 0 || j == g.n2 - 1) ? 0.5 * g.h2 : g.h2;
        add_face(p, q, face_beta(b, g.positions[p], g.positions[q]) * len / g.h1);
      }
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j + 1 < g.n2; ++j) {
        int p = g.node_id(i, j), q = g.node_id(i, j + 1);
        double len = (i == 0 || i == g.n1 - 1) ? 0.5 * g.h1 : g.h1;
        add_face(p, q, face_beta(b, g.positions[p], g.positions[q]) * len / g.h2);
      }
  } else {
    const bool disk = g.kind == GridKind::PolarDisk;
    const int i_first = disk ? 1 : 0;  // first ring with distinct theta nodes
    // radial faces
    for (int i = i_first; i + 1 < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        int p = g.node_id(i, j), q = g.node_id(i + 1, j);
        double rf = g.coord1(i) + 0.5 * g.h1;
        add_face(p, q,
                 face_beta(b, g.positions[p], g.positions[q]) * rf * g.h2 / g.h1);
      }
    if (disk) {
      // the collapsed axis node couples to every first-ring node
      for (int j = 0; j < g.n2; ++j) {
        int q = g.node_id(1, j);
        double rf = 0.5 * g.h1;
        add_face(0, q, face_beta(b, g.positions[0], g.positions[q]) * rf * g.h2 / g.h1);
      }
    }
    // azimuthal faces; boundary rings carry half-width cells
    for (int i = i_first; i < g.n1; ++i) {
      double r = g.coord1(i);
      double lo = std::max(g.a1, r - 0.5 * g.h1);
      double hi = std::min(g.a1 + (g.n1 - 1) * g.h1, r + 0.5 * g.h1);
      double len = hi - lo;
      for (int j = 0; j < g.n2; ++j) {
        int p = g.node_id(i, j), q = g.node_id(i, j + 1);
        add_face(p, q,
                 face_beta(b, g.positions[p], g.positions[q]) * len / (r * g.h2));
      }
    }
  }

  // interior unknown numbering
  unknown_of_.assign(g.node_count(), -1);
  for (int id = 0; id < g.node_count(); ++id)
    if (g.tags[id] == BoundaryTag::Interior) {
      unknown_of_[id] = static_cast<int>(interior_.size());
      interior_.push_back(id);
    }

  const int n = unknowns();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * faces_.size());
  for (const Face& f : faces_) {
    int up = unknown_of_[f.p], uq = unknown_of_[f.q];
    if (up >= 0) trip.emplace_back(up, up, f.t);
    if (uq >= 0) trip.emplace_back(uq, uq, f.t);
    if (up >= 0 && uq >= 0) {
      trip.emplace_back(up, uq, -f.t);
      trip.emplace_back(uq, up, -f.t);
    }
  }
  M_.resize(n, n);
  M_.setFromTriplets(trip.begin(), trip.end());
  M_.makeCompressed();

  direct_ = n <= direct_limit;
  if (direct_) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
    ldlt_->compute(M_);
    if (ldlt_->info() != Eigen::Success)
      throw std::runtime_error("EllipticSolver: factorization failed");
  } else {
    M_row_ = M_;
    cg_ = std::make_unique<
        Eigen::ConjugateGradient<SpMatRow, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>>();
    cg_->setTolerance(tolerance_);
    cg_->setMaxIterations(40000);
    cg_->compute(M_row_);
  }
}

Eigen::VectorXd EllipticSolver::assemble_rhs(
    const ScalarField& omega, const Eigen::ArrayXd& boundary_values) const {
  const Grid& g = *grid_;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns());
  for (int u = 0; u < unknowns(); ++u) {
    int id = interior_[u];
    rhs[u] = g.measures[id] * omega.values[id];
  }
  for (const Face& f : faces_) {
    int up = unknown_of_[f.p], uq = unknown_of_[f.q];
    if (up >= 0 && uq < 0) rhs[up] += f.t * boundary_values[f.q];
    if (uq >= 0 && up < 0) rhs[uq] += f.t * boundary_values[f.p];
  }
  return rhs;
}

ScalarField EllipticSolver::run_solve(const Eigen::VectorXd& rhs,
                                      const Eigen::ArrayXd& boundary_values,
                                      const ScalarField* guess) const {
  Eigen::VectorXd x;
  if (direct_) {
    x = ldlt_->solve(rhs);
  } else {
    if (guess) {
      Eigen::VectorXd x0(unknowns());
      for (int u = 0; u < unknowns(); ++u) x0[u] = guess->values[interior_[u]];
      x = cg_->solveWithGuess(rhs, x0);
    } else {
      x = cg_->solve(rhs);
    }
    if (cg_->info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "EllipticSolver: conjugate gradient stalled after "
          << cg_->iterations() << " iterations, residual " << cg_->error();
      throw std::runtime_error(msg.str());
    }
  }
  ScalarField psi(*grid_);
  psi.values = boundary_values;
  for (int u = 0; u < unknowns(); ++u) psi.values[interior_[u]] = x[u];
  return psi;
}

ScalarField EllipticSolver::solve_dirichlet(const ScalarField& omega,
                                            const ScalarField* guess) const {
  if (!omega.all_finite())
    throw std::invalid_argument("solve_dirichlet: source has non-finite values");
  Eigen::ArrayXd bv = Eigen::ArrayXd::Zero(grid_->node_count());
  return run_solve(assemble_rhs(omega, bv), bv, guess);
}

ScalarField EllipticSolver::solve_with_boundary(
    const ScalarField& omega, const std::vector<double>& island_values,
    double outer_value) const {
  const Grid& g = *grid_;
  Eigen::ArrayXd bv = Eigen::ArrayXd::Zero(g.node_count());
  for (int id = 0; id < g.node_count(); ++id) {
    if (g.tags[id] == BoundaryTag::OuterBoundary)
      bv[id] = outer_value;
    else if (g.tags[id] >= static_cast<BoundaryTag>(0))
      bv[id] = island_values.at(static_cast<int>(g.tags[id]));
  }
  return run_solve(assemble_rhs(omega, bv), bv, nullptr);
}

double EllipticSolver::island_flux(const ScalarField& psi, int island,
                                   const ScalarField* omega) const {
  if (island < 0 || island >= static_cast<int>(island_faces_.size()))
    throw std::out_of_range("island_flux: island index out of range");
  double s = 0.0;
  for (const Face& f : island_faces_[island])
    s += f.t * (psi.values[f.p] - psi.values[f.q]);
  if (omega) {
    const Grid& g = *grid_;
    for (int id = 0; id < g.node_count(); ++id)
      if (g.tags[id] == static_cast<BoundaryTag>(island))
        s -= g.measures[id] * omega->values[id];
  }
  return s;
}

double EllipticSolver::dirichlet_form(const ScalarField& f,
                                      const ScalarField& g) const {
  double s = 0.0;
  for (const Face& fc : faces_)
    s += fc.t * (f.values[fc.p] - f.values[fc.q]) *
         (g.values[fc.p] - g.values[fc.q]);
  return s;
}

double EllipticSolver::residual(const ScalarField& omega,
                                const ScalarField& psi) const {
  Eigen::ArrayXd bv(psi.values);
  for (int u = 0; u < unknowns(); ++u) bv[interior_[u]] = 0.0;
  Eigen::VectorXd rhs = assemble_rhs(omega, bv);
  Eigen::VectorXd x(unknowns());
  for (int u = 0; u < unknowns(); ++u) x[u] = psi.values[interior_[u]];
  double denom = rhs.norm();
  if (denom == 0.0) return (M_ * x).norm();
  return (M_ * x - rhs).norm() / denom;
}

IslandBasis island_basis(const EllipticSolver& solver) {
  IslandBasis basis;
  const int m = solver.grid().domain.island_count();
  if (m == 0) return basis;

  ScalarField zero(solver.grid());
  for (int i = 0; i < m; ++i) {
    std::vector<double> values(m, 0.0);
    values[i] = 1.0;
    basis.phi.push_back(solver.solve_with_boundary(zero, values, 0.0));
  }

  basis.D.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      basis.D(i, j) = basis.D(j, i) = solver.dirichlet_form(basis.phi[i], basis.phi[j]);

  Eigen::LLT<Eigen::MatrixXd> llt(basis.D);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("island_basis: Gram matrix is not positive definite");
  basis.D_inv = llt.solve(Eigen::MatrixXd::Identity(m, m));

  for (int i = 0; i < m; ++i) {
    ScalarField psi(solver.grid());
    for (int j = 0; j < m; ++j) psi.values += basis.D_inv(i, j) * basis.phi[j].values;
    basis.psi.push_back(std::move(psi));
  }
  return basis;
}

ScalarField assemble_stream(const EllipticSolver& solver, const IslandBasis& basis,
                            const ScalarField& omega,
                            const Eigen::VectorXd& circulations,
                            const ScalarField* guess) {
  const int m = solver.grid().domain.island_count();
  if (circulations.size() != m)
    throw std::invalid_argument("assemble_stream: need one circulation per island");
  ScalarField psi = solver.solve_dirichlet(omega, guess);
  for (int i = 0; i < m; ++i) {
    double flux = solver.island_flux(psi, i, &omega);
    psi.values += (circulations[i] - flux) * basis.psi[i].values;
  }
  return psi;
}

ScalarField greens_sample(const EllipticSolver& solver, const Vec2& y) {
  const Grid& g = solver.grid();
  if (distance_to_boundary(g.domain, y) < 2.0 * g.local_spacing(y))
    throw std::invalid_argument("greens_sample: source too close to the boundary");

  // node whose cell contains y
  int i, j;
  if (g.kind == GridKind::Cartesian) {
    i = static_cast<int>(std::lround((y.x() - g.a1) / g.h1));
    j = static_cast<int>(std::lround((y.y() - g.a2) / g.h2));
  } else {
    double r = y.norm();
    double t = std::atan2(y.y(), y.x());
    if (t < 0.0) t += 2.0 * M_PI;
    i = static_cast<int>(std::lround((r - g.a1) / g.h1));
    j = static_cast<int>(std::lround(t / g.h2));
  }
  int id = g.node_id(i, j);
  ScalarField delta(g);
  delta.values[id] = 1.0 / g.measures[id];
  return solver.solve_dirichlet(delta);
}

}  // namespace lake
