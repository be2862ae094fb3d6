#include "lake/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lake {

namespace {

constexpr double kSingularTol = 1e-14;

void check_half_plane_args(const Vec2& x, const Vec2& y) {
  if (!(x.y() > 0.0) || !(y.y() > 0.0))
    throw std::invalid_argument("green_half_plane: points must have x2 > 0");
  if ((x - y).squaredNorm() < kSingularTol * kSingularTol)
    throw std::invalid_argument("green_half_plane: singular at x = y");
}

void check_disk_args(const Vec2& x, const Vec2& y) {
  if (!(x.norm() < 1.0) || !(y.norm() < 1.0))
    throw std::invalid_argument("green_disk: points must lie inside the unit disk");
  if ((x - y).squaredNorm() < kSingularTol * kSingularTol)
    throw std::invalid_argument("green_disk: singular at x = y");
}

}  // namespace

double green_half_plane(const Vec2& x, const Vec2& y) {
  check_half_plane_args(x, y);
  double d2 = (x - y).squaredNorm();
  return std::log1p(4.0 * x.y() * y.y() / d2) / (4.0 * M_PI);
}

double green_disk(const Vec2& x, const Vec2& y) {
  check_disk_args(x, y);
  double d2 = (x - y).squaredNorm();
  double p = (1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm());
  return std::log1p(p / d2) / (4.0 * M_PI);
}

double green(KernelKind kind, const Vec2& x, const Vec2& y) {
  return kind == KernelKind::HalfPlane ? green_half_plane(x, y) : green_disk(x, y);
}

Vec2 grad_green(KernelKind kind, const Vec2& x, const Vec2& y) {
  if (kind == KernelKind::HalfPlane) {
    check_half_plane_args(x, y);
    double d2 = (x - y).squaredNorm();
    double n = d2 + 4.0 * x.y() * y.y();
    Vec2 g = Vec2(0.0, y.y()) - 2.0 * x.y() * y.y() * (x - y) / d2;
    return g / (M_PI * n);
  }
  check_disk_args(x, y);
  double d2 = (x - y).squaredNorm();
  double mx = 1.0 - x.squaredNorm(), my = 1.0 - y.squaredNorm();
  double n = d2 + mx * my;
  Vec2 g = x * my + (mx * my / d2) * (x - y);
  return -g / (2.0 * M_PI * n);
}

Vec2 symmetric_gradient_sum(KernelKind kind, const Vec2& x, const Vec2& y) {
  if (kind == KernelKind::HalfPlane) {
    check_half_plane_args(x, y);
    double d2 = (x - y).squaredNorm();
    return Vec2(0.0, x.y() + y.y()) / (M_PI * (d2 + 4.0 * x.y() * y.y()));
  }
  check_disk_args(x, y);
  double d2 = (x - y).squaredNorm();
  double mx = 1.0 - x.squaredNorm(), my = 1.0 - y.squaredNorm();
  return -(x * my + y * mx) / (2.0 * M_PI * (d2 + mx * my));
}

double disk_regular_part(const Vec2& x, const Vec2& y) {
  check_disk_args(x, y);
  double d2 = (x - y).squaredNorm();
  double p = (1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm());
  return std::log(d2 + p) / (4.0 * M_PI);
}

GreenBoundsReport check_green_bounds(
    KernelKind kind, const std::vector<std::pair<Vec2, Vec2>>& pairs) {
  GreenBoundsReport rep;
  rep.log_bound_margin = std::numeric_limits<double>::infinity();

  // distance to the reference boundary and a diameter surrogate
  double box = 0.0;
  for (const auto& [x, y] : pairs) box = std::max({box, x.norm(), y.norm()});
  const double diam = kind == KernelKind::UnitDisk ? 2.0 : std::sqrt(5.0) * box;
  auto dist = [&](const Vec2& p) {
    return kind == KernelKind::UnitDisk ? 1.0 - p.norm() : p.y();
  };

  for (const auto& [x, y] : pairs) {
    double d = (x - y).norm();
    if (d < 1e-9) {
      ++rep.degenerate_skipped;
      continue;
    }
    double g = green(kind, x, y);
    if (g < 0.0) {
      rep.log_bound_margin = std::min(rep.log_bound_margin, g);
      continue;
    }
    double log_bound = std::log(diam / d) / (2.0 * M_PI);
    rep.log_bound_margin = std::min(rep.log_bound_margin, log_bound - g);

    double dd = dist(x) * dist(y);
    if (dd > 0.0) {
      double c = std::expm1(4.0 * M_PI * g) * d * d / dd;
      rep.sharp_bound_constant = std::max(rep.sharp_bound_constant, c);
    }
    double cg = grad_green(kind, x, y).norm() * d;
    rep.gradient_constant = std::max(rep.gradient_constant, cg);
    ++rep.pairs_checked;
  }
  rep.log_bound_holds = rep.log_bound_margin >= 0.0;
  return rep;
}

std::vector<std::pair<Vec2, Vec2>> sample_disk_pairs(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto draw = [&]() {
    while (true) {
      Vec2 p(unit(rng), unit(rng));
      if (p.norm() < 0.995) return p;
    }
  };
  std::vector<std::pair<Vec2, Vec2>> pairs;
  pairs.reserve(count);
  for (int k = 0; k < count; ++k) pairs.emplace_back(draw(), draw());
  return pairs;
}

}  // namespace lake
