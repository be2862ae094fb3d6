// Scenario configuration, run orchestration and result emission.
#pragma once

#include "lake/asymptotics.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lake {

enum class BlobProfile { Smooth, Cosine };

struct Scenario {
  std::string name = "scenario";
  DomainSpec domain = DomainSpec::unit_disk();
  BathymetryField bathymetry = BathymetryField::constant(1.0);

  BlobProfile profile = BlobProfile::Smooth;
  Vec2 q0 = Vec2::Zero();
  double epsilon = 0.05;
  double gamma_target = 1.0;
  Eigen::VectorXd circulations;  // one per island

  int res1 = 128, res2 = 256;
  double cfl = 0.5;
  double s_end = 1.0;
  int record_interval = 10;
  std::uint64_t seed = 0;
  double delta = 0.2;               // boundary cutoff width
  double solver_tolerance = 1e-10;
  bool monotone_clip = true;

  // throws std::invalid_argument naming the offending field
  void validate() const;
};

// canonical key-value text of a scenario; the config hash is taken over it
std::string to_config_text(const Scenario& sc);
std::string config_hash(const Scenario& sc);

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Concentrated initial vorticity (Gamma/eps^2) f((x-q0)/eps) / integral(f),
// renormalized on the grid so that the discrete circulation matches
// gamma_target.  Errors out when the blob spans fewer than six cells.
ScalarField concentrated_blob(BlobProfile profile, const Vec2& q0, double eps,
                              double gamma_target, const Grid& grid);

struct RunOutput {
  Scenario scenario;
  std::vector<DiagnosticsRecord> records;
  double E0 = 0.0, Gamma0 = 0.0, Omega0 = 0.0;
  double t_end = 0.0, dt = 0.0;
  int n_steps = 0;
  double clamped_distance = 0.0;
  std::string hash;
  std::string code_version;

  std::string to_json() const;
};

inline constexpr const char* kCodeVersion = "lakesim 0.1.0";

RunOutput run(const Scenario& scenario);

// Runs the scenario across the given core sizes (descending), scaling the
// resolution so the blob stays at least twelve cells across.  jobs > 1 runs
// members concurrently.
ConvergenceReport convergence_study(const Scenario& base,
                                    const std::vector<double>& epsilons,
                                    int jobs = 1,
                                    std::vector<RunOutput>* member_outputs = nullptr);

// member grid resolution used by the study for a given core size
std::pair<int, int> study_resolution(const Scenario& base, double eps);

// Write records.csv / report.json / config.echo (and per-member CSVs for
// studies) into the directory; refuses to overwrite without force.
void emit(const RunOutput& output, const std::filesystem::path& dir, bool force);
void emit(const ConvergenceReport& report, const std::vector<RunOutput>& members,
          const Scenario& base, const std::filesystem::path& dir, bool force);

}  // namespace lake
