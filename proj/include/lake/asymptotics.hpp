// The limiting vortex motion dq/ds = -perp(1/b)(q), time rescaling, and
// trajectory comparison across shrinking-core runs.
#pragma once

#include "lake/bathymetry.hpp"
#include "lake/diagnostics.hpp"

#include <string>
#include <vector>

namespace lake {

struct LimitTrajectory {
  Vec2 q0 = Vec2::Zero();
  std::vector<double> s;  // uniform sample times
  std::vector<Vec2> q;
  double step_tolerance = 0.0;

  double span() const { return s.empty() ? 0.0 : s.back(); }
  Vec2 at(double s_query) const;  // linear interpolation between samples
  bool stationary(double tol = 1e-9) const;
};

// Integrate the level-line motion with RK4; the internal step is halved
// until a whole-trajectory Richardson check passes the tolerance.  Throws
// (with the exit time) if the path leaves the open domain, which can only
// happen when b is not constant on boundary components.
LimitTrajectory limiting_trajectory(const BathymetryField& b,
                                    const DomainSpec& domain, const Vec2& q0,
                                    double s_span, int n_samples,
                                    double tolerance = 1e-10);

// s = E t / Gamma; requires Gamma != 0
double rescale_time(double t, double E, double Gamma);

// sup over recorded rescaled times within the trajectory span of
// |q_recorded - q_limit(s)|; requires the records to cover the span
double trajectory_error(const std::vector<DiagnosticsRecord>& records,
                        const LimitTrajectory& limit);

// The two leading-order forms of the vortex velocity: the core-size form
// (per unit circulation, original time) and the conserved-quantity form
// evaluated with the matching energy surrogate E = (Gamma^2/4pi) ln(1/eps).
struct RichardsonVelocity {
  Vec2 eps_form;     // (Gamma / 4pi) ln(1/eps) perp(ln b)(q)
  Vec2 energy_form;  // -(E/Gamma) perp(1/b)(q)
  double ratio;      // |eps_form| / |energy_form|; equals b(q); 0 when both vanish
};

RichardsonVelocity richardson_velocity(const BathymetryField& b, const Vec2& q,
                                       double Gamma, double eps);

struct ConvergenceReport {
  std::string scenario;
  std::vector<double> epsilons;
  std::vector<double> sup_errors;
  std::vector<double> gamma_drift;   // max |Gamma(t)-Gamma(0)| / |Gamma(0)|
  std::vector<double> energy_drift;  // max |E(t)-E(0)| / E(0)
  std::vector<double> omega_slope;   // fitted |Omega-Omega(0)| slope / (|Gamma| ||Gamma||)
  std::vector<std::string> member_status;  // "ok" or the failure reason
  bool pass = false;

  std::string verdict() const { return pass ? "pass" : "fail"; }
  std::string to_json() const;
};

}  // namespace lake
