// End-to-end acceptance suite.  Each numbered check prints one PASS/FAIL
// line with its key measurements; the process exits nonzero if any fails.
#include "lake/kernels.hpp"
#include "lake/scenario.hpp"
#include "lake/velocity.hpp"

#include "manufactured.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace lake;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%2d] %-42s %s  (%s, %.1fs)\n", index, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  Clock::time_point start = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

// ---------------------------------------------------------------- scenarios

// Conservation runs: a smooth interior bump in the depth, constant on the
// boundary, with the core started on one of its level circles.
Scenario disk_bump_scenario(double eps) {
  Scenario sc;
  sc.name = "disk-bump";
  sc.domain = DomainSpec::unit_disk();
  sc.bathymetry = BathymetryField::bump(1.0, 0.5, {0.0, 0.3}, 0.7);
  sc.q0 = Vec2(0.0, -0.2);
  sc.epsilon = eps;
  sc.gamma_target = 1.0;
  sc.circulations = Eigen::VectorXd();
  sc.res1 = 128;
  sc.res2 = 256;
  sc.s_end = 1.0;
  sc.record_interval = 10;
  return sc;
}

Scenario rectangle_tilt_scenario() {
  Scenario sc;
  sc.name = "rectangle-tilt";
  sc.domain = DomainSpec::rectangle(3.0, 1.4);
  sc.bathymetry = BathymetryField::affine(1.0, {0.0, 1.0});
  sc.q0 = Vec2(-0.5, 0.0);
  sc.epsilon = 0.1;
  sc.gamma_target = 1.0;
  sc.circulations = Eigen::VectorXd();
  sc.res1 = 180;
  sc.res2 = 84;
  sc.s_end = 1.0;
  sc.record_interval = 10;
  sc.solver_tolerance = 1e-8;
  return sc;
}

Scenario disk_bowl_scenario() {
  Scenario sc;
  sc.name = "disk-bowl";
  sc.domain = DomainSpec::unit_disk();
  sc.bathymetry = BathymetryField::radial(1.0, 1.0);
  sc.q0 = Vec2(0.5, 0.0);
  sc.epsilon = 0.05;
  sc.gamma_target = 1.0;
  sc.circulations = Eigen::VectorXd();
  sc.res1 = 160;
  sc.res2 = 320;
  sc.s_end = 1.0;
  sc.record_interval = 10;
  return sc;
}

Scenario disk_flat_scenario() {
  Scenario sc = disk_bump_scenario(0.05);
  sc.name = "disk-flat";
  sc.bathymetry = BathymetryField::constant(1.0);
  sc.q0 = Vec2(0.0, 0.0);
  return sc;
}

// ---------------------------------------------------------------- criteria

void check_kernel_goldens() {
  Timer timer;
  double dev = 0.0;
  dev = std::max(dev, std::abs(green_half_plane({0, 1}, {0, 2}) -
                               std::log(9.0) / (4.0 * M_PI)));
  dev = std::max(dev, std::abs(green_disk({0.5, 0}, {0, 0}) -
                               std::log(2.0) / (2.0 * M_PI)));
  Vec2 sym = symmetric_gradient_sum(KernelKind::HalfPlane, {0, 1}, {0, 2});
  dev = std::max(dev, std::abs(sym.y() - 1.0 / (3.0 * M_PI)));
  bool tangential_zero = sym.x() == 0.0;
  report(1, "analytic kernel goldens", dev <= 1e-10 && tangential_zero,
         fmt("max dev %.2e, tangential %g", dev, sym.x()), timer.elapsed());
}

void check_elliptic_convergence() {
  Timer timer;
  using testing::ManufacturedCase;
  struct Combo {
    const char* tag;
    DomainSpec dom;
    ManufacturedCase mc;
    std::vector<BathymetryField> depths;
    int aspect;
  };
  // the affine depth is scaled on curvilinear domains to stay positive on
  // the closed domain (1 + x2 vanishes at the lowest boundary point)
  std::vector<Combo> combos = {
      {"disk", DomainSpec::unit_disk(), testing::manufactured_disk(),
       {BathymetryField::constant(1.0), BathymetryField::affine(1.0, {0.0, 0.5}),
        BathymetryField::radial(1.0, 1.0)},
       2},
      {"rect", DomainSpec::rectangle(2.0, 1.0),
       testing::manufactured_rectangle(2.0, 1.0),
       {BathymetryField::constant(1.0), BathymetryField::affine(1.0, {0.0, 1.0}),
        BathymetryField::radial(1.0, 1.0)},
       1},
      {"annulus", DomainSpec::annulus(0.3), testing::manufactured_annulus(0.3),
       {BathymetryField::constant(1.0), BathymetryField::affine(1.0, {0.0, 0.5}),
        BathymetryField::radial(1.0, 1.0)},
       2},
  };
  double min_order = 1e9;
  for (const Combo& combo : combos) {
    for (const BathymetryField& b : combo.depths) {
      std::vector<double> errs;
      for (int res : {64, 128, 256}) {
        Grid grid = build_grid(combo.dom, res, res * combo.aspect);
        EllipticSolver solver(grid, b);
        ScalarField omega = sample_field(
            grid, [&](const Vec2& p) { return combo.mc.source(b, p); });
        ScalarField psi = solver.solve_dirichlet(omega);
        double err = 0.0;
        for (int id = 0; id < grid.node_count(); ++id)
          err = std::max(err, std::abs(psi.values[id] -
                                       combo.mc.psi(grid.positions[id])));
        errs.push_back(err);
      }
      min_order = std::min(min_order, std::log2(errs[0] / errs[1]));
      min_order = std::min(min_order, std::log2(errs[1] / errs[2]));
    }
  }

  // reference radial solution
  Grid grid = build_grid(DomainSpec::unit_disk(), 128, 256);
  EllipticSolver solver(grid, BathymetryField::constant(1.0));
  ScalarField one = sample_field(grid, [](const Vec2&) { return 1.0; });
  ScalarField psi = solver.solve_dirichlet(one);
  double ref_err = 0.0;
  for (int id = 0; id < grid.node_count(); ++id)
    ref_err = std::max(ref_err,
                       std::abs(psi.values[id] -
                                (1.0 - grid.positions[id].squaredNorm()) / 4.0));

  report(2, "stream solver convergence", min_order >= 1.9 && ref_err < 1e-3,
         fmt("min order %.2f, radial max err %.2e", min_order, ref_err),
         timer.elapsed());
}

void check_island_machinery() {
  Timer timer;
  DomainSpec dom = DomainSpec::annulus(0.3);
  BathymetryField flat = BathymetryField::constant(1.0);

  std::vector<double> phi_errs;
  double d11 = 0.0, flux1 = 0.0, flux0 = 0.0;
  for (int res : {64, 128, 256}) {
    Grid grid = build_grid(dom, res, 2 * res);
    EllipticSolver solver(grid, flat);
    IslandBasis basis = island_basis(solver);
    double err = 0.0;
    for (int id = 0; id < grid.node_count(); ++id) {
      double want = std::log(1.0 / grid.positions[id].norm()) / std::log(1.0 / 0.3);
      err = std::max(err, std::abs(basis.phi[0].values[id] - want));
    }
    phi_errs.push_back(err);
    if (res == 128) {
      d11 = basis.D(0, 0);
      VelocityField u1 = velocity_from_stream(basis.psi[0], flat);
      flux1 = circulation_island(u1, flat, 0);
      ScalarField one = sample_field(grid, [](const Vec2&) { return 1.0; });
      ScalarField psi0 =
          assemble_stream(solver, basis, one, Eigen::VectorXd::Zero(1));
      VelocityField u0 = velocity_from_stream(psi0, flat);
      flux0 = circulation_island(u0, flat, 0);
    }
  }
  double order = std::min(std::log2(phi_errs[0] / phi_errs[1]),
                          std::log2(phi_errs[1] / phi_errs[2]));
  double d11_want = 2.0 * M_PI / std::log(1.0 / 0.3);
  bool pass = order >= 1.9 && std::abs(d11 - d11_want) <= 0.01 * d11_want &&
              std::abs(flux1 - 1.0) <= 1e-3 && std::abs(flux0) <= 1e-3;
  report(3, "island machinery on the annulus", pass,
         fmt("phi order %.2f, D11 %.5g (want %.5g), unit flux dev %.1e, "
             "closed flux %.1e",
             order, d11, d11_want, std::abs(flux1 - 1.0), std::abs(flux0)),
         timer.elapsed());
}

void check_conservation(const RunOutput& run10, const RunOutput& run05) {
  Timer timer;
  auto drifts = [](const RunOutput& out) {
    double gdrift = 0.0, edrift = 0.0, snum = 0.0, sden = 0.0;
    for (const DiagnosticsRecord& r : out.records) {
      gdrift = std::max(gdrift, std::abs(r.Gamma - out.Gamma0) /
                                    std::abs(out.Gamma0));
      edrift = std::max(edrift, std::abs(r.E - out.E0) / out.E0);
      snum += r.t * std::abs(r.Omega - out.Omega0);
      sden += r.t * r.t;
    }
    double slope = sden > 0 ? snum / sden : 0.0;
    // normalized by |Gamma| ||Gamma||; no islands here so ||Gamma|| = |Gamma|
    double norm = std::abs(out.Gamma0) * std::abs(out.Gamma0);
    return std::array<double, 3>{gdrift, edrift, slope / norm};
  };
  auto [g05, e05, s05] = drifts(run05);
  auto [g10, e10, s10] = drifts(run10);
  bool slope_bounded = s05 <= std::max(2.5 * s10, 0.05);
  bool pass = g05 <= 1e-3 && e05 <= 1e-2 && slope_bounded;
  report(4, "conservation over the bump run", pass,
         fmt("Gamma drift %.2e, E drift %.2e, Omega slopes %.3g -> %.3g", g05,
             e05, s10, s05),
         timer.elapsed());
}

void check_energy_identity() {
  Timer timer;
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> pos(-0.4, 0.4), width(0.3, 0.5);

  double worst = 0.0;
  Grid disk = build_grid(DomainSpec::unit_disk(), 128, 256);
  BathymetryField flat = BathymetryField::constant(1.0);
  EllipticSolver solver(disk, flat);
  IslandBasis none = island_basis(solver);
  for (int k = 0; k < 5; ++k) {
    Vec2 c(pos(rng), pos(rng));
    double w = width(rng);
    ScalarField omega = sample_field(disk, [&](const Vec2& p) {
      return (1.0 + 0.3 * k) * smooth_bump((p - c).squaredNorm() / (w * w));
    });
    VelocityField u = velocity_from_stream(solver.solve_dirichlet(omega), flat);
    double e_flow = kinetic_energy(u, flat);
    double e_vort = kinetic_energy_vortex(solver, none, omega, Eigen::VectorXd());
    worst = std::max(worst, std::abs(e_flow - e_vort) / e_flow);
  }

  Grid ann = build_grid(DomainSpec::annulus(0.3), 128, 256);
  BathymetryField tilted = BathymetryField::affine(1.0, {0.0, 0.5});
  EllipticSolver sa(ann, tilted);
  IslandBasis basis = island_basis(sa);
  ScalarField omega = sample_field(ann, [](const Vec2& p) {
    return smooth_bump((p - Vec2(0.6, 0.1)).squaredNorm() / 0.0625);
  });
  Eigen::VectorXd circ = Eigen::VectorXd::Constant(1, 1.0);
  VelocityField u = velocity_from_stream(assemble_stream(sa, basis, omega, circ),
                                         tilted);
  double e_flow = kinetic_energy(u, tilted);
  double e_vort = kinetic_energy_vortex(sa, basis, omega, circ);
  worst = std::max(worst, std::abs(e_flow - e_vort) / e_flow);

  report(5, "energy identity, flow vs vorticity side", worst <= 1e-3,
         fmt("worst relative gap %.2e", worst), timer.elapsed());
}

void check_lorentz_suite(const RunOutput& run05) {
  Timer timer;
  // machine-exact indicator goldens on a cell-aligned polar grid
  Grid g = build_grid(DomainSpec::unit_disk(), 127, 128);
  ScalarField unit = sample_field(g, [](const Vec2&) { return 1.0; });
  ScalarField half =
      sample_field(g, [](const Vec2& p) { return p.norm() < 0.5 ? 2.0 : 0.0; });
  double dev = std::abs(lorentz_norm(unit) - M_PI / 2.0);
  dev = std::max(dev, std::abs(lorentz_norm(half) -
                               2.0 * (M_PI / 4.0) * (std::log(2.0) + 0.5)));
  bool goldens = dev <= 1e-3;

  // transported norm stays inside the depth-ratio envelope
  const BathymetryField& b = run05.scenario.bathymetry;
  Grid rg = build_grid(run05.scenario.domain, run05.scenario.res1,
                       run05.scenario.res2);
  double bmin = 1e300, bmax = 0.0;
  for (int id = 0; id < rg.node_count(); ++id) {
    double depth = b.depth(rg.positions[id]);
    bmin = std::min(bmin, depth);
    bmax = std::max(bmax, depth);
  }
  double envelope = (bmax / bmin) * (bmax / bmin) * 1.05;
  double worst_ratio = 0.0;
  for (const DiagnosticsRecord& r : run05.records)
    worst_ratio = std::max(worst_ratio, r.lorentz / run05.records[0].lorentz);
  bool transport = worst_ratio <= envelope;

  // rescaling inequality over random piecewise-constant fields
  Grid sg = build_grid(DomainSpec::unit_disk(), 24, 48);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> value(0.0, 3.0), sigma(0.1, 1.0);
  bool scaling = true;
  for (int trial = 0; trial < 50; ++trial) {
    ScalarField w(sg);
    for (int id = 0; id < sg.node_count(); ++id)
      w.values[id] = value(rng) < 1.0 ? 0.0 : std::floor(value(rng) * 4.0) / 4.0;
    double base = lorentz_norm(w);
    double l1 = (w.values.abs() * sg.measures.array()).sum();
    double s = sigma(rng);
    scaling = scaling && lorentz_norm_rescaled(w, s) <=
                             (base + std::log(1.0 / s) * l1) / (s * s) + 1e-9;
  }

  report(6, "rearrangement norm suite", goldens && transport && scaling,
         fmt("golden dev %.1e, transport ratio %.3f (cap %.3f), scaling %s",
             dev, worst_ratio, envelope, scaling ? "ok" : "violated"),
         timer.elapsed());
}

void check_concentration(const RunOutput& run05) {
  Timer timer;
  bool monotone = true;
  for (const DiagnosticsRecord& r : run05.records)
    for (std::size_t k = 1; k < r.mass_outside.size(); ++k)
      monotone = monotone && r.mass_outside[k] <= r.mass_outside[k - 1] + 1e-15;
  report(7, "mass outside the core shrinks with radius", monotone,
         fmt("%zu records checked", run05.records.size()), timer.elapsed());
}

void check_main_theorem() {
  Timer timer;

  // tilted rectangle: shrinking cores track the level line with shrinking error
  Scenario rect = rectangle_tilt_scenario();
  std::vector<RunOutput> members;
  ConvergenceReport rep =
      convergence_study(rect, {0.1, 0.05, 0.025}, 1, &members);
  bool decreasing = rep.member_status ==
                        std::vector<std::string>{"ok", "ok", "ok"} &&
                    rep.sup_errors[1] < rep.sup_errors[0] &&
                    rep.sup_errors[2] < rep.sup_errors[1];

  // radial bowl: the core circles at its starting depth, clockwise
  RunOutput bowl = lake::run(disk_bowl_scenario());
  double r0 = bowl.scenario.q0.norm();
  bool on_circle = true;
  for (const DiagnosticsRecord& r : bowl.records)
    on_circle = on_circle && std::abs(r.q.norm() - r0) <= 0.05 * r0;
  double angle_end = std::atan2(bowl.records.back().q.y(),
                                bowl.records.back().q.x());
  bool clockwise = angle_end < -0.2;  // rate -1.28 over one rescaled unit

  // flat bottom: stationary to within a few cells
  RunOutput flat = lake::run(disk_flat_scenario());
  Grid fg = build_grid(flat.scenario.domain, flat.scenario.res1,
                       flat.scenario.res2);
  double wander = 0.0;
  for (const DiagnosticsRecord& r : flat.records)
    wander = std::max(wander, (r.q - flat.scenario.q0).norm());
  double cell = fg.local_spacing(flat.scenario.q0);
  bool stationary = wander <= 5.0 * cell;

  bool pass = decreasing && on_circle && clockwise && stationary;
  report(8, "core follows the depth level lines", pass,
         fmt("sup errors %.3g/%.3g/%.3g, angle %.2f, wander %.2e (cap %.2e)",
             rep.sup_errors[0], rep.sup_errors[1], rep.sup_errors[2], angle_end,
             wander, 5.0 * cell),
         timer.elapsed());
}

void check_core_speed(const RunOutput& run05) {
  Timer timer;
  const Scenario& sc = run05.scenario;
  double target = run05.E0 / run05.Gamma0 *
                  sc.bathymetry.perp_grad_inv(sc.q0).norm();
  double path = 0.0, t_span = 0.0;
  const auto& rec = run05.records;
  for (std::size_t k = 1; k < rec.size() && rec[k].s <= 0.2; ++k) {
    path += (rec[k].q - rec[k - 1].q).norm();
    t_span = rec[k].t;
  }
  double speed = t_span > 0 ? path / t_span : 0.0;
  double ratio = speed / target;
  report(9, "measured core speed vs leading order", ratio >= 0.5 && ratio <= 2.0,
         fmt("speed %.4f, leading order %.4f, ratio %.2f", speed, target, ratio),
         timer.elapsed());
}

void check_flow_map_contract() {
  Timer timer;
  FlowMapper rigid;
  rigid.velocity = [](double, const Vec2& x) { return Vec2(-x.y(), x.x()); };
  rigid.max_substep = 2e-3;
  Vec2 quarter = flow_map(rigid, 0.0, M_PI / 2, {Vec2(1.0, 0.0)})[0];
  double turn_err = (quarter - Vec2(0.0, 1.0)).norm();

  FlowMapper smooth;
  smooth.velocity = [](double, const Vec2& x) {
    return Vec2(-x.y() + 0.2 * std::sin(x.x()), x.x() + 0.1 * std::cos(x.y()));
  };
  smooth.max_substep = 1e-3;
  std::vector<Vec2> pts = {{0.5, 0.0}, {-0.2, 0.3}, {0.1, -0.6}};
  auto composed = flow_map(smooth, 0.7, 1.3, flow_map(smooth, 0.0, 0.7, pts));
  auto direct = flow_map(smooth, 0.0, 1.3, pts);
  double comp_err = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    comp_err = std::max(comp_err, (composed[k] - direct[k]).norm());

  // depth-weighted integrals survive one transport step
  Scenario sc = disk_bump_scenario(0.05);
  Grid grid = build_grid(sc.domain, sc.res1, sc.res2);
  EllipticSolver solver(grid, sc.bathymetry, sc.solver_tolerance);
  IslandBasis basis = island_basis(solver);
  ScalarField omega0 =
      concentrated_blob(sc.profile, sc.q0, sc.epsilon, sc.gamma_target, grid);
  LakeState state = make_state(solver, basis, omega0, sc.circulations);
  double dt = 0.4 * grid.cfl_spacing() / state.u.max_speed();

  FlowMapper frozen;
  frozen.velocity = [&](double, const Vec2& x) { return interpolate(state.u, x); };
  frozen.domain = &grid.domain;
  frozen.max_substep = dt / 3.0;
  std::vector<Vec2> feet = flow_map(frozen, dt, 0.0, grid.positions);
  auto test_fn = [](const Vec2& p) { return std::exp(p.x()) * std::cos(p.y()); };
  double before = 0.0, after = 0.0;
  for (int id = 0; id < grid.node_count(); ++id) {
    double depth = sc.bathymetry.depth(grid.positions[id]);
    before += test_fn(grid.positions[id]) * depth * grid.measures[id];
    after += test_fn(feet[id]) * depth * grid.measures[id];
  }
  double h = grid.cfl_spacing();
  double budget = 20.0 * (h * h + dt * dt * dt);
  double measure_err = std::abs(after - before);

  bool pass = turn_err <= 1e-6 && comp_err <= 1e-5 && measure_err <= budget;
  report(10, "flow map contract", pass,
         fmt("turn %.1e, composition %.1e, measure drift %.2e (budget %.2e)",
             turn_err, comp_err, measure_err, budget),
         timer.elapsed());
}

}  // namespace

int main() {
  Timer total;
  std::printf("acceptance suite, %s\n", kCodeVersion);

  check_kernel_goldens();
  check_elliptic_convergence();
  check_island_machinery();

  Timer bump_timer;
  std::printf("     ... running conservation scenarios\n");
  std::fflush(stdout);
  RunOutput run10 = lake::run(disk_bump_scenario(0.1));
  RunOutput run05 = lake::run(disk_bump_scenario(0.05));
  std::printf("     ... bump runs done (%.1fs)\n", bump_timer.elapsed());

  check_conservation(run10, run05);
  check_energy_identity();
  check_lorentz_suite(run05);
  check_concentration(run05);
  check_main_theorem();
  check_core_speed(run05);
  check_flow_map_contract();

  std::printf("summary: %d/10 criteria pass (total %.0fs)\n", 10 - g_failures,
              total.elapsed());
  return g_failures == 0 ? 0 : 1;
}
