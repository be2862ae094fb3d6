// Closed-form Dirichlet Green functions of the Laplacian on the half-plane
// and the unit disk, their gradients, and executable upper-bound checks.
#pragma once

#include "lake/geometry.hpp"

#include <cstdint>
#include <vector>

namespace lake {

enum class KernelKind { HalfPlane, UnitDisk };

// G(x,y) = ln(1 + 4 x2 y2 / |x-y|^2) / (4 pi), for x2, y2 > 0
double green_half_plane(const Vec2& x, const Vec2& y);

// G(x,y) = ln(1 + (1-|x|^2)(1-|y|^2) / |x-y|^2) / (4 pi), for |x|, |y| < 1
double green_disk(const Vec2& x, const Vec2& y);

double green(KernelKind kind, const Vec2& x, const Vec2& y);

// gradient with respect to the first argument
Vec2 grad_green(KernelKind kind, const Vec2& x, const Vec2& y);

// symmetric combination grad_x G(x,y) + grad_x G(y,x); stays bounded when
// the pair approaches the boundary together while each term blows up
Vec2 symmetric_gradient_sum(KernelKind kind, const Vec2& x, const Vec2& y);

// regular part H(x,y) = G(x,y) - ln(1/|x-y|)/(2 pi), disk only
double disk_regular_part(const Vec2& x, const Vec2& y);

// diameter of the kernel's reference domain (disk: 2; half-plane checks use
// a bounded sample box so callers pass their own diameter)
struct GreenBoundsReport {
  int pairs_checked = 0;
  int degenerate_skipped = 0;
  // margins: min over pairs of (bound - G); nonnegative means the bound holds
  double log_bound_margin = 0.0;
  // smallest constants making each inequality hold over the sample
  double sharp_bound_constant = 0.0;  // G <= ln(1 + C d(x) d(y)/|x-y|^2)/(4 pi)
  double gradient_constant = 0.0;     // |grad G| <= C / |x-y|
  bool log_bound_holds = false;
};

// Evaluate the classical bounds over a sample of point pairs inside the
// unit disk (the one supported domain with exact distances for this check).
GreenBoundsReport check_green_bounds(KernelKind kind,
                                     const std::vector<std::pair<Vec2, Vec2>>& pairs);

// seeded sample of interior disk point pairs for bound scans
std::vector<std::pair<Vec2, Vec2>> sample_disk_pairs(int count, std::uint64_t seed);

}  // namespace lake
