#include "lake/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace lake {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* domain_name(DomainKind k) {
  switch (k) {
    case DomainKind::UnitDisk: return "disk";
    case DomainKind::Rectangle: return "rectangle";
    case DomainKind::Annulus: return "annulus";
  }
  return "?";
}

const char* family_name(BathymetryFamily f) {
  switch (f) {
    case BathymetryFamily::Constant: return "constant";
    case BathymetryFamily::Affine: return "affine";
    case BathymetryFamily::Radial: return "radial";
    case BathymetryFamily::Bump: return "bump";
  }
  return "?";
}

double profile_value(BlobProfile p, double s2) {
  if (p == BlobProfile::Smooth) return smooth_bump(s2);
  if (s2 >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(M_PI * std::sqrt(s2)));
}

// integral of the profile over the plane, by radial Simpson quadrature
double profile_mass(BlobProfile p) {
  const int n = 2000;
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double r = k * h;
    double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * r * profile_value(p, r * r);
  }
  return 2.0 * M_PI * sum * h / 3.0;
}

}  // namespace

void Scenario::validate() const {
  if (domain.kind == DomainKind::Annulus &&
      !(domain.inner_radius > 0.0 && domain.inner_radius < 1.0))
    throw std::invalid_argument("domain.inner_radius must lie in (0,1)");
  if (domain.kind == DomainKind::Rectangle &&
      (!(domain.width > 0.0) || !(domain.height > 0.0)))
    throw std::invalid_argument("domain.width and domain.height must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("blob.epsilon must lie in (0, 0.5)");
  if (gamma_target == 0.0)
    throw std::invalid_argument("blob.gamma must be nonzero");
  if (!domain.contains(q0))
    throw std::invalid_argument("blob.q0 must lie inside the domain");
  if (distance_to_boundary(domain, q0) <= epsilon)
    throw std::invalid_argument(
        "blob containment violated: the ball B(q0, epsilon) must lie inside "
        "the domain");
  if (circulations.size() != domain.island_count())
    throw std::invalid_argument("circulations: need exactly one value per island");
  if (res1 < 8 || res2 < 8)
    throw std::invalid_argument("run.resolution must be >= 8 per axis");
  if (domain.kind != DomainKind::Rectangle && res2 % 2 != 0)
    throw std::invalid_argument("run.resolution: polar theta count must be even");
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw std::invalid_argument("run.cfl must lie in (0, 1]");
  if (!(s_end > 0.0)) throw std::invalid_argument("run.s_end must be positive");
  if (record_interval < 1)
    throw std::invalid_argument("run.record_interval must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("run.delta must be positive");
  if (!(solver_tolerance > 0.0 && solver_tolerance < 1e-2))
    throw std::invalid_argument("run.solver_tolerance out of range");
}

std::string to_config_text(const Scenario& sc) {
  std::ostringstream out;
  out << "[scenario]\nname = " << sc.name << "\n\n";
  out << "[domain]\nkind = " << domain_name(sc.domain.kind) << "\n";
  if (sc.domain.kind == DomainKind::Rectangle)
    out << "width = " << fmt(sc.domain.width)
        << "\nheight = " << fmt(sc.domain.height) << "\n";
  if (sc.domain.kind == DomainKind::Annulus)
    out << "inner_radius = " << fmt(sc.domain.inner_radius) << "\n";
  out << "\n[bathymetry]\nfamily = " << family_name(sc.bathymetry.family) << "\n";
  out << "c0 = " << fmt(sc.bathymetry.c0) << "\n";
  switch (sc.bathymetry.family) {
    case BathymetryFamily::Affine:
      out << "slope = " << fmt(sc.bathymetry.slope.x()) << " "
          << fmt(sc.bathymetry.slope.y()) << "\n";
      break;
    case BathymetryFamily::Radial:
      out << "c2 = " << fmt(sc.bathymetry.c2) << "\n";
      break;
    case BathymetryFamily::Bump:
      out << "amplitude = " << fmt(sc.bathymetry.amplitude) << "\n"
          << "center = " << fmt(sc.bathymetry.center.x()) << " "
          << fmt(sc.bathymetry.center.y()) << "\n"
          << "width = " << fmt(sc.bathymetry.width) << "\n";
      break;
    case BathymetryFamily::Constant:
      break;
  }
  out << "\n[blob]\nprofile = "
      << (sc.profile == BlobProfile::Smooth ? "smooth" : "cosine") << "\n";
  out << "q0 = " << fmt(sc.q0.x()) << " " << fmt(sc.q0.y()) << "\n";
  out << "epsilon = " << fmt(sc.epsilon) << "\n";
  out << "gamma = " << fmt(sc.gamma_target) << "\n";
  if (sc.circulations.size() > 0) {
    out << "\n[circulations]\n";
    for (int i = 0; i < sc.circulations.size(); ++i)
      out << "gamma_" << (i + 1) << " = " << fmt(sc.circulations[i]) << "\n";
  }
  out << "\n[run]\nresolution = " << sc.res1 << " " << sc.res2 << "\n";
  out << "cfl = " << fmt(sc.cfl) << "\n";
  out << "s_end = " << fmt(sc.s_end) << "\n";
  out << "record_interval = " << sc.record_interval << "\n";
  out << "seed = " << sc.seed << "\n";
  out << "delta = " << fmt(sc.delta) << "\n";
  out << "solver_tolerance = " << fmt(sc.solver_tolerance) << "\n";
  out << "monotone_clip = " << (sc.monotone_clip ? "true" : "false") << "\n";
  return out.str();
}

std::string config_hash(const Scenario& sc) {
  // FNV-1a over the canonical text
  std::string text = to_config_text(sc);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct ConfigEntry {
  std::string value;
  int line;
};

struct ParsedConfig {
  std::map<std::string, ConfigEntry> entries;  // "section.key"
  std::string origin;

  bool has(const std::string& key) const { return entries.count(key) > 0; }
  const ConfigEntry& get(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end())
      throw std::invalid_argument(origin + ": missing required key '" + key + "'");
    return it->second;
  }
  double number(const std::string& key) const {
    const ConfigEntry& e = get(key);
    try {
      std::size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument(origin + ":" + std::to_string(e.line) +
                                  ": key '" + key + "' is not a number");
    }
  }
  double number_or(const std::string& key, double def) const {
    return has(key) ? number(key) : def;
  }
  Vec2 pair(const std::string& key) const {
    const ConfigEntry& e = get(key);
    std::istringstream in(e.value);
    double a, b;
    if (!(in >> a >> b))
      throw std::invalid_argument(origin + ":" + std::to_string(e.line) +
                                  ": key '" + key + "' needs two numbers");
    return Vec2(a, b);
  }
};

ParsedConfig parse_ini(const std::string& text, const std::string& origin) {
  ParsedConfig cfg;
  cfg.origin = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto l = line.find_first_not_of(" \t\r");
    if (l == std::string::npos) continue;
    auto r = line.find_last_not_of(" \t\r");
    line = line.substr(l, r - l + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(value);
    cfg.entries[section + "." + key] = {value, lineno};
  }
  return cfg;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  ParsedConfig cfg = parse_ini(text, origin);
  Scenario sc;
  if (cfg.has("scenario.name")) sc.name = cfg.get("scenario.name").value;

  std::string kind = cfg.get("domain.kind").value;
  if (kind == "disk") {
    sc.domain = DomainSpec::unit_disk();
  } else if (kind == "rectangle") {
    sc.domain = DomainSpec::rectangle(cfg.number("domain.width"),
                                      cfg.number("domain.height"));
  } else if (kind == "annulus") {
    sc.domain = DomainSpec::annulus(cfg.number("domain.inner_radius"));
  } else {
    throw std::invalid_argument(origin + ": domain.kind must be disk, rectangle "
                                         "or annulus");
  }

  std::string family =
      cfg.has("bathymetry.family") ? cfg.get("bathymetry.family").value : "constant";
  double c0 = cfg.number_or("bathymetry.c0", 1.0);
  if (family == "constant") {
    sc.bathymetry = BathymetryField::constant(c0);
  } else if (family == "affine") {
    sc.bathymetry = BathymetryField::affine(c0, cfg.pair("bathymetry.slope"));
  } else if (family == "radial") {
    sc.bathymetry = BathymetryField::radial(c0, cfg.number("bathymetry.c2"));
  } else if (family == "bump") {
    sc.bathymetry =
        BathymetryField::bump(c0, cfg.number("bathymetry.amplitude"),
                              cfg.pair("bathymetry.center"),
                              cfg.number("bathymetry.width"));
  } else {
    throw std::invalid_argument(origin +
                                ": bathymetry.family must be constant, affine, "
                                "radial or bump");
  }

  if (cfg.has("blob.profile")) {
    std::string p = cfg.get("blob.profile").value;
    if (p == "smooth")
      sc.profile = BlobProfile::Smooth;
    else if (p == "cosine")
      sc.profile = BlobProfile::Cosine;
    else
      throw std::invalid_argument(origin + ": blob.profile must be smooth or cosine");
  }
  sc.q0 = cfg.pair("blob.q0");
  sc.epsilon = cfg.number("blob.epsilon");
  sc.gamma_target = cfg.number_or("blob.gamma", 1.0);

  sc.circulations = Eigen::VectorXd::Zero(sc.domain.island_count());
  for (int i = 0; i < sc.domain.island_count(); ++i)
    sc.circulations[i] =
        cfg.number_or("circulations.gamma_" + std::to_string(i + 1), 0.0);

  if (cfg.has("run.resolution")) {
    Vec2 res = cfg.pair("run.resolution");
    sc.res1 = static_cast<int>(res.x());
    sc.res2 = static_cast<int>(res.y());
  } else {
    sc.res1 = 128;
    sc.res2 = sc.domain.kind == DomainKind::Rectangle ? 128 : 256;
  }
  sc.cfl = cfg.number_or("run.cfl", 0.5);
  sc.s_end = cfg.number_or("run.s_end", 1.0);
  sc.record_interval =
      static_cast<int>(cfg.number_or("run.record_interval", 10));
  sc.seed = static_cast<std::uint64_t>(cfg.number_or("run.seed", 0));
  sc.delta = cfg.number_or("run.delta", 0.2);
  sc.solver_tolerance = cfg.number_or("run.solver_tolerance", 1e-10);
  if (cfg.has("run.monotone_clip")) {
    std::string v = cfg.get("run.monotone_clip").value;
    sc.monotone_clip = v == "true" || v == "1";
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.filename().string());
}

ScalarField concentrated_blob(BlobProfile profile, const Vec2& q0, double eps,
                              double gamma_target, const Grid& grid) {
  if (2.0 * eps / grid.local_spacing(q0) < 6.0)
    throw std::invalid_argument(
        "concentrated_blob: core under-resolved, need at least 6 cells across");
  const double mass = profile_mass(profile);
  ScalarField omega(grid);
  for (int id = 0; id < grid.node_count(); ++id) {
    double s2 = (grid.positions[id] - q0).squaredNorm() / (eps * eps);
    omega.values[id] =
        gamma_target / (eps * eps) * profile_value(profile, s2) / mass;
  }
  double measured = circulation(omega);
  if (measured == 0.0)
    throw std::invalid_argument("concentrated_blob: blob missed the grid");
  omega.values *= gamma_target / measured;
  return omega;
}

RunOutput run(const Scenario& scenario) {
  scenario.validate();
  Grid grid = build_grid(scenario.domain, scenario.res1, scenario.res2);
  EllipticSolver solver(grid, scenario.bathymetry, scenario.solver_tolerance);
  IslandBasis basis = island_basis(solver);
  ScalarField omega0 = concentrated_blob(scenario.profile, scenario.q0,
                                         scenario.epsilon, scenario.gamma_target,
                                         grid);
  LakeState state = make_state(solver, basis, omega0, scenario.circulations);

  RunOutput out;
  out.scenario = scenario;
  out.Gamma0 = circulation(omega0);
  out.Omega0 = total_vorticity(omega0, scenario.bathymetry);
  out.E0 = kinetic_energy(state.u, scenario.bathymetry);
  out.hash = config_hash(scenario);
  out.code_version = kCodeVersion;

  if (!(out.E0 > 0.0)) throw std::runtime_error("run: initial energy not positive");
  out.t_end = scenario.s_end * out.Gamma0 / out.E0;

  // fixed step chosen from the initial speed with headroom for drift
  double umax0 = state.u.max_speed();
  double dt_limit = scenario.cfl * grid.cfl_spacing() / std::max(umax0, 1e-12);
  out.n_steps = std::max(1, static_cast<int>(std::ceil(out.t_end /
                                                       (0.8 * dt_limit))));
  out.dt = out.t_end / out.n_steps;

  TransportOptions opts;
  opts.cfl = scenario.cfl;
  opts.monotone_clip = scenario.monotone_clip;

  DiagnosticsContext ctx = make_diagnostics_context(
      grid, scenario.bathymetry, scenario.delta, out.E0, out.Gamma0);
  auto hook = [&](const LakeState& s, int) {
    out.records.push_back(make_record(s, ctx));
  };
  LakeState final_state =
      step_simulation(std::move(state), out.dt, out.n_steps, solver, basis,
                      scenario.bathymetry, opts, scenario.record_interval, hook);
  out.clamped_distance = final_state.clamped_distance;
  return out;
}

std::pair<int, int> study_resolution(const Scenario& base, double eps) {
  const double h = eps / 6.0;  // twelve cells across the core
  auto even = [](int n) { return n % 2 ? n + 1 : n; };
  switch (base.domain.kind) {
    case DomainKind::Rectangle:
      return {std::max(8, static_cast<int>(std::ceil(base.domain.width / h))),
              std::max(8, static_cast<int>(std::ceil(base.domain.height / h)))};
    case DomainKind::UnitDisk: {
      int nr = std::max(8, static_cast<int>(std::ceil(1.0 / h)));
      double r_ref = std::min(1.0, std::max(0.3, base.q0.norm() + 0.1));
      int nt = even(std::max(8, static_cast<int>(std::ceil(2.0 * M_PI * r_ref / h))));
      return {nr, nt};
    }
    case DomainKind::Annulus: {
      double a = base.domain.inner_radius;
      int nr = std::max(8, static_cast<int>(std::ceil((1.0 - a) / h)));
      int nt = even(std::max(8, static_cast<int>(std::ceil(2.0 * M_PI * a / h))));
      return {nr, nt};
    }
  }
  return {base.res1, base.res2};
}

ConvergenceReport convergence_study(const Scenario& base,
                                    const std::vector<double>& epsilons, int jobs,
                                    std::vector<RunOutput>* member_outputs) {
  if (epsilons.size() < 2)
    throw std::invalid_argument("convergence_study: need at least two core sizes");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (!(epsilons[k] < epsilons[k - 1]))
      throw std::invalid_argument(
          "convergence_study: core sizes must be strictly descending");

  const int n = static_cast<int>(epsilons.size());
  std::vector<Scenario> members(n, base);
  for (int k = 0; k < n; ++k) {
    members[k].epsilon = epsilons[k];
    auto res = study_resolution(base, epsilons[k]);
    members[k].res1 = res.first;
    members[k].res2 = res.second;
    members[k].name = base.name + "-eps" + std::to_string(epsilons[k]);
    members[k].validate();
  }

  struct MemberResult {
    RunOutput output;
    std::string status = "ok";
    double sup_error = 0.0, gdrift = 0.0, edrift = 0.0, oslope = 0.0;
    double cell = 0.0;
  };

  LimitTrajectory limit = limiting_trajectory(base.bathymetry, base.domain,
                                              base.q0, base.s_end, 256);

  auto run_member = [&](int k) {
    MemberResult mr;
    try {
      mr.output = run(members[k]);
      Grid grid = build_grid(members[k].domain, members[k].res1, members[k].res2);
      mr.cell = grid.local_spacing(members[k].q0);
      mr.sup_error = trajectory_error(mr.output.records, limit);
      double g0 = mr.output.Gamma0, e0 = mr.output.E0;
      double st_num = 0.0, st_den = 0.0;
      for (const DiagnosticsRecord& r : mr.output.records) {
        mr.gdrift = std::max(mr.gdrift, std::abs(r.Gamma - g0) / std::abs(g0));
        mr.edrift = std::max(mr.edrift, std::abs(r.E - e0) / e0);
        st_num += r.t * std::abs(r.Omega - mr.output.Omega0);
        st_den += r.t * r.t;
      }
      double norm_gamma = std::abs(g0);
      for (int i = 0; i < members[k].circulations.size(); ++i)
        norm_gamma += std::abs(members[k].circulations[i]);
      if (st_den > 0.0)
        mr.oslope = st_num / st_den / (std::abs(g0) * norm_gamma);
    } catch (const std::exception& e) {
      mr.status = e.what();
    }
    return mr;
  };

  std::vector<MemberResult> results(n);
  jobs = std::max(1, jobs);
  for (int start = 0; start < n; start += jobs) {
    int stop = std::min(n, start + jobs);
    std::vector<std::future<MemberResult>> batch;
    for (int k = start; k < stop; ++k)
      batch.push_back(std::async(std::launch::async, run_member, k));
    for (int k = start; k < stop; ++k) results[k] = batch[k - start].get();
  }

  ConvergenceReport rep;
  rep.scenario = base.name;
  rep.epsilons = epsilons;
  bool all_ok = true;
  for (int k = 0; k < n; ++k) {
    rep.sup_errors.push_back(results[k].sup_error);
    rep.gamma_drift.push_back(results[k].gdrift);
    rep.energy_drift.push_back(results[k].edrift);
    rep.omega_slope.push_back(results[k].oslope);
    rep.member_status.push_back(results[k].status);
    all_ok = all_ok && results[k].status == "ok";
    if (member_outputs) member_outputs->push_back(std::move(results[k].output));
  }

  bool budgets = true;
  for (int k = 0; k < n; ++k)
    budgets = budgets && rep.gamma_drift[k] <= 1e-3 && rep.energy_drift[k] <= 1e-2;

  bool trajectory_ok;
  if (limit.stationary()) {
    // flat-bottom branch: the core must stay put to within a few cells
    trajectory_ok = true;
    for (int k = 0; k < n; ++k)
      trajectory_ok = trajectory_ok && rep.sup_errors[k] <= 5.0 * results[k].cell;
  } else {
    trajectory_ok = true;
    for (int k = 1; k < n; ++k)
      trajectory_ok = trajectory_ok && rep.sup_errors[k] < rep.sup_errors[k - 1];
  }

  rep.pass = all_ok && budgets && trajectory_ok;
  return rep;
}

std::string RunOutput::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["config_hash"] = hash;
  j["code_version"] = code_version;
  j["E0"] = E0;
  j["Gamma0"] = Gamma0;
  j["Omega0"] = Omega0;
  j["t_end"] = t_end;
  j["dt"] = dt;
  j["n_steps"] = n_steps;
  j["n_records"] = records.size();
  j["clamped_distance"] = clamped_distance;
  if (!records.empty()) {
    const DiagnosticsRecord& last = records.back();
    j["final"] = {{"t", last.t},          {"s", last.s},
                  {"Gamma", last.Gamma},  {"Omega", last.Omega},
                  {"E", last.E},          {"rho", last.rho},
                  {"q", {last.q.x(), last.q.y()}},
                  {"q_truncated", last.q_truncated}};
  }
  return j.dump(2);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text,
                bool force) {
  if (!force && std::filesystem::exists(path))
    throw std::runtime_error("emit: refusing to overwrite " + path.string() +
                             " without --force");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit: cannot write " + path.string());
  out << text;
}

std::string records_csv(const std::vector<DiagnosticsRecord>& records) {
  std::ostringstream out;
  out << csv_header() << "\n";
  for (const DiagnosticsRecord& r : records) out << csv_row(r) << "\n";
  return out.str();
}

}  // namespace

void emit(const RunOutput& output, const std::filesystem::path& dir, bool force) {
  std::filesystem::create_directories(dir);
  write_file(dir / "records.csv", records_csv(output.records), force);
  write_file(dir / "report.json", output.to_json() + "\n", force);
  write_file(dir / "config.echo", to_config_text(output.scenario), force);
}

void emit(const ConvergenceReport& report, const std::vector<RunOutput>& members,
          const Scenario& base, const std::filesystem::path& dir, bool force) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.json", report.to_json() + "\n", force);
  write_file(dir / "config.echo", to_config_text(base), force);
  for (std::size_t k = 0; k < members.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "records_eps%g.csv", report.epsilons[k]);
    write_file(dir / name, records_csv(members[k].records), force);
  }
}

}  // namespace lake
