#include "lake/asymptotics.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace lake {

Vec2 LimitTrajectory::at(double s_query) const {
  if (s.empty()) throw std::logic_error("LimitTrajectory: empty");
  if (s_query <= s.front()) return q.front();
  if (s_query >= s.back()) return q.back();
  auto it = std::upper_bound(s.begin(), s.end(), s_query);
  std::size_t k = static_cast<std::size_t>(it - s.begin());
  double w = (s_query - s[k - 1]) / (s[k] - s[k - 1]);
  return (1.0 - w) * q[k - 1] + w * q[k];
}

bool LimitTrajectory::stationary(double tol) const {
  for (const Vec2& p : q)
    if ((p - q0).norm() > tol) return false;
  return true;
}

namespace {

struct TrajectoryExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Vec2> integrate_samples(const BathymetryField& b,
                                    const DomainSpec& domain, const Vec2& q0,
                                    double s_span, int n_samples, int sub) {
  auto v = [&](const Vec2& p) -> Vec2 { return -b.perp_grad_inv(p); };
  std::vector<Vec2> out;
  out.reserve(n_samples + 1);
  out.push_back(q0);
  Vec2 p = q0;
  const double ds = s_span / (n_samples * sub);
  for (int k = 0; k < n_samples; ++k) {
    for (int m = 0; m < sub; ++m) {
      Vec2 k1 = v(p);
      Vec2 k2 = v(p + 0.5 * ds * k1);
      Vec2 k3 = v(p + 0.5 * ds * k2);
      Vec2 k4 = v(p + ds * k3);
      p += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!domain.contains(p, 0.0)) {
        std::ostringstream msg;
        msg << "limiting_trajectory: path exited the domain at s = "
            << (k * sub + m + 1) * ds;
        throw TrajectoryExit(msg.str());
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

LimitTrajectory limiting_trajectory(const BathymetryField& b,
                                    const DomainSpec& domain, const Vec2& q0,
                                    double s_span, int n_samples,
                                    double tolerance) {
  if (n_samples < 1)
    throw std::invalid_argument("limiting_trajectory: need at least one sample");
  if (!domain.contains(q0) || distance_to_boundary(domain, q0) <= 0.0)
    throw std::invalid_argument("limiting_trajectory: q0 must be interior");

  LimitTrajectory traj;
  traj.q0 = q0;
  traj.s.resize(n_samples + 1);
  for (int k = 0; k <= n_samples; ++k) traj.s[k] = s_span * k / n_samples;

  if (s_span == 0.0 || b.constant_depth()) {
    traj.q.assign(n_samples + 1, q0);
    traj.step_tolerance = 0.0;
    return traj;
  }

  // halve the internal step until the whole path is Richardson-converged
  int sub = 4;
  std::vector<Vec2> coarse = integrate_samples(b, domain, q0, s_span, n_samples, sub);
  for (int round = 0; round < 16; ++round) {
    std::vector<Vec2> fine =
        integrate_samples(b, domain, q0, s_span, n_samples, 2 * sub);
    double diff = 0.0;
    for (int k = 0; k <= n_samples; ++k)
      diff = std::max(diff, (fine[k] - coarse[k]).norm());
    if (diff <= tolerance) {
      traj.q = std::move(fine);
      traj.step_tolerance = diff;
      return traj;
    }
    coarse = std::move(fine);
    sub *= 2;
  }
  throw std::runtime_error("limiting_trajectory: step refinement did not converge");
}

double rescale_time(double t, double E, double Gamma) {
  if (Gamma == 0.0) throw std::invalid_argument("rescale_time: Gamma must be nonzero");
  return E * t / Gamma;
}

double trajectory_error(const std::vector<DiagnosticsRecord>& records,
                        const LimitTrajectory& limit) {
  if (records.empty())
    throw std::invalid_argument("trajectory_error: no records");
  double covered = 0.0;
  for (const DiagnosticsRecord& r : records) covered = std::max(covered, r.s);
  if (covered + 1e-9 < limit.span())
    throw std::invalid_argument(
        "trajectory_error: records do not cover the trajectory span");
  double err = 0.0;
  for (const DiagnosticsRecord& r : records) {
    if (r.s < -1e-12 || r.s > limit.span() + 1e-9) continue;
    err = std::max(err, (r.q - limit.at(r.s)).norm());
  }
  return err;
}

RichardsonVelocity richardson_velocity(const BathymetryField& b, const Vec2& q,
                                       double Gamma, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("richardson_velocity: eps must lie in (0,1)");
  RichardsonVelocity rv;
  const double strength = Gamma / (4.0 * M_PI) * std::log(1.0 / eps);
  rv.eps_form = strength * b.perp_grad_log(q);
  rv.energy_form = -strength * b.perp_grad_inv(q);
  double en = rv.energy_form.norm();
  rv.ratio = en > 0.0 ? rv.eps_form.norm() / en : 0.0;
  return rv;
}

std::string ConvergenceReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["epsilons"] = epsilons;
  j["sup_errors"] = sup_errors;
  j["gamma_drift"] = gamma_drift;
  j["energy_drift"] = energy_drift;
  j["omega_slope"] = omega_slope;
  j["member_status"] = member_status;
  j["verdict"] = verdict();
  return j.dump(2);
}

}  // namespace lake
