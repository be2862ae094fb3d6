// Command-line driver: configured runs, shrinking-core studies, kernel
// self-tests and record-file checks.
#include "lake/kernels.hpp"
#include "lake/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

lake::Scenario load_with_overrides(const std::string& config,
                                   const std::vector<int>& resolution) {
  lake::Scenario sc = lake::load_scenario(config);
  if (!resolution.empty()) {
    if (resolution.size() != 2)
      throw std::invalid_argument("--resolution needs two values");
    sc.res1 = resolution[0];
    sc.res2 = resolution[1];
    sc.validate();
  }
  return sc;
}

int kernel_selftest() {
  using lake::Vec2;
  struct Golden {
    const char* name;
    double got, want, tol;
  };
  const double ln9_4pi = std::log(9.0) / (4.0 * M_PI);
  const double ln2_2pi = std::log(2.0) / (2.0 * M_PI);
  Vec2 sym = lake::symmetric_gradient_sum(lake::KernelKind::HalfPlane,
                                          Vec2(0.0, 1.0), Vec2(0.0, 2.0));
  const Golden goldens[] = {
      {"half-plane G((0,1),(0,2))",
       lake::green_half_plane(Vec2(0.0, 1.0), Vec2(0.0, 2.0)), ln9_4pi, 1e-10},
      {"disk G((0.5,0),(0,0))",
       lake::green_disk(Vec2(0.5, 0.0), Vec2(0.0, 0.0)), ln2_2pi, 1e-10},
      {"half-plane symmetric sum, normal part", sym.y(), 1.0 / (3.0 * M_PI),
       1e-10},
      {"half-plane symmetric sum, tangential part", sym.x(), 0.0, 0.0},
  };
  bool ok = true;
  for (const Golden& g : goldens) {
    bool pass = std::abs(g.got - g.want) <= g.tol;
    ok = ok && pass;
    std::printf("%-45s %.12g  (expected %.12g)  %s\n", g.name, g.got, g.want,
                pass ? "ok" : "FAIL");
  }

  auto pairs = lake::sample_disk_pairs(10000, 20240801u);
  auto rep = lake::check_green_bounds(lake::KernelKind::UnitDisk, pairs);
  std::printf("disk bounds over %d pairs (%d degenerate skipped):\n",
              rep.pairs_checked, rep.degenerate_skipped);
  std::printf("  log bound margin          %.6g  %s\n", rep.log_bound_margin,
              rep.log_bound_holds ? "ok" : "FAIL");
  std::printf("  sharp-bound constant      %.6g  (<= 4 expected)\n",
              rep.sharp_bound_constant);
  std::printf("  gradient-bound constant   %.6g\n", rep.gradient_constant);
  ok = ok && rep.log_bound_holds && rep.sharp_bound_constant <= 4.0 + 1e-9 &&
       std::isfinite(rep.gradient_constant);
  return ok ? kExitPass : kExitFail;
}

int diag_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "diag: cannot open " << path << "\n";
    return kExitUsage;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = lake::parse_csv(buf.str());
  if (records.empty()) {
    std::cerr << "diag: no records\n";
    return kExitFail;
  }
  bool ok = true;
  double prev_t = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    if (!(r.t > prev_t) && k > 0) {
      std::printf("record %zu: non-monotone time %.17g\n", k, r.t);
      ok = false;
    }
    prev_t = r.t;
    double rho = std::exp(-4.0 * M_PI * r.E / (r.Gamma * r.Omega));
    if (std::abs(rho - r.rho) > 1e-12 * std::max(1.0, std::abs(rho))) {
      std::printf("record %zu: rho inconsistent with Gamma, Omega, E\n", k);
      ok = false;
    }
    for (std::size_t m = 1; m < r.mass_outside.size(); ++m)
      if (r.mass_outside[m] > r.mass_outside[m - 1] + 1e-12) {
        std::printf("record %zu: mass outside not monotone in radius\n", k);
        ok = false;
      }
  }
  const auto& first = records.front();
  const auto& last = records.back();
  std::printf("records: %zu, t in [%g, %g], s in [%g, %g]\n", records.size(),
              first.t, last.t, first.s, last.s);
  std::printf("Gamma drift %.3e  E drift %.3e  Omega drift %.3e\n",
              std::abs(last.Gamma - first.Gamma) / std::abs(first.Gamma),
              std::abs(last.E - first.E) / first.E,
              std::abs(last.Omega - first.Omega) / std::abs(first.Omega));
  std::printf("invariants %s\n", ok ? "ok" : "FAIL");
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lake-equation vortex simulator"};
  app.require_subcommand(1);

  std::string config, out_dir = "out";
  bool force = false;
  std::vector<int> resolution;
  std::vector<double> epsilons;
  int jobs = 1;

  CLI::App* cmd_run = app.add_subcommand("run", "run one configured scenario");
  cmd_run->add_option("config", config, "scenario config file")->required();
  cmd_run->add_option("--resolution", resolution, "override per-axis cells")
      ->expected(2);
  cmd_run->add_option("--out", out_dir, "output directory");
  cmd_run->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* cmd_study =
      app.add_subcommand("study", "trajectory convergence across core sizes");
  cmd_study->add_option("config", config, "scenario config file")->required();
  cmd_study->add_option("--epsilons", epsilons, "descending core sizes")
      ->required()
      ->expected(-2);
  cmd_study->add_option("--out", out_dir, "output directory");
  cmd_study->add_option("--jobs", jobs, "concurrent study members");
  cmd_study->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* cmd_kernels = app.add_subcommand("kernels", "closed-form kernel checks");
  bool selftest = false;
  cmd_kernels->add_flag("--selftest", selftest, "run the golden self-test");

  CLI::App* cmd_diag = app.add_subcommand("diag", "check a records.csv file");
  std::string records_path;
  cmd_diag->add_option("records", records_path, "records.csv path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (cmd_run->parsed()) {
      lake::Scenario sc = load_with_overrides(config, resolution);
      lake::RunOutput output = lake::run(sc);
      lake::emit(output, out_dir, force);
      std::printf("run %s: %d steps, dt %.3e, %zu records -> %s\n",
                  sc.name.c_str(), output.n_steps, output.dt,
                  output.records.size(), out_dir.c_str());
      return kExitPass;
    }
    if (cmd_study->parsed()) {
      lake::Scenario sc = load_with_overrides(config, resolution);
      std::vector<lake::RunOutput> members;
      lake::ConvergenceReport rep =
          lake::convergence_study(sc, epsilons, jobs, &members);
      lake::emit(rep, members, sc, out_dir, force);
      for (std::size_t k = 0; k < rep.epsilons.size(); ++k)
        std::printf("eps %-8g sup_error %-12.5g Gamma drift %-10.3e E drift "
                    "%-10.3e status %s\n",
                    rep.epsilons[k], rep.sup_errors[k], rep.gamma_drift[k],
                    rep.energy_drift[k], rep.member_status[k].c_str());
      std::printf("verdict: %s\n", rep.verdict().c_str());
      return rep.pass ? kExitPass : kExitFail;
    }
    if (cmd_kernels->parsed()) {
      if (!selftest) {
        std::cerr << "kernels: nothing to do (use --selftest)\n";
        return kExitUsage;
      }
      return kernel_selftest();
    }
    if (cmd_diag->parsed()) return diag_records(records_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
