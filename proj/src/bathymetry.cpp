#include "lake/bathymetry.hpp"

#include <cmath>

namespace lake {

double smooth_bump(double s2) {
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double smooth_bump_ds2(double s2) {
  if (s2 >= 1.0) return 0.0;
  double f = smooth_bump(s2);
  if (f == 0.0) return 0.0;
  double d = 1.0 - s2;
  return -f / (d * d);
}

double BathymetryField::depth(const Vec2& p) const {
  switch (family) {
    case BathymetryFamily::Constant:
      return c0;
    case BathymetryFamily::Affine:
      return c0 + slope.dot(p);
    case BathymetryFamily::Radial:
      return c0 + c2 * p.squaredNorm();
    case BathymetryFamily::Bump: {
      Vec2 z = (p - center) / width;
      return c0 + amplitude * smooth_bump(z.squaredNorm());
    }
  }
  return c0;
}

Vec2 BathymetryField::gradient(const Vec2& p) const {
  switch (family) {
    case BathymetryFamily::Constant:
      return Vec2::Zero();
    case BathymetryFamily::Affine:
      return slope;
    case BathymetryFamily::Radial:
      return 2.0 * c2 * p;
    case BathymetryFamily::Bump: {
      Vec2 z = (p - center) / width;
      double df = smooth_bump_ds2(z.squaredNorm());
      return amplitude * df * 2.0 * z / width;
    }
  }
  return Vec2::Zero();
}

BathymetryField BathymetryField::constant(double c0) {
  BathymetryField b;
  b.family = BathymetryFamily::Constant;
  b.c0 = c0;
  return b;
}

BathymetryField BathymetryField::affine(double c0, const Vec2& slope) {
  BathymetryField b;
  b.family = BathymetryFamily::Affine;
  b.c0 = c0;
  b.slope = slope;
  return b;
}

BathymetryField BathymetryField::radial(double c0, double c2) {
  BathymetryField b;
  b.family = BathymetryFamily::Radial;
  b.c0 = c0;
  b.c2 = c2;
  return b;
}

BathymetryField BathymetryField::bump(double c0, double amplitude,
                                      const Vec2& center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump: width must be positive");
  BathymetryField b;
  b.family = BathymetryFamily::Bump;
  b.c0 = c0;
  b.amplitude = amplitude;
  b.center = center;
  b.width = width;
  return b;
}

void validate_positive_depth(const BathymetryField& b, const Grid& grid) {
  for (int id = 0; id < grid.node_count(); ++id) {
    if (!(b.depth(grid.positions[id]) > 0.0))
      throw std::invalid_argument("bathymetry: non-positive depth at grid node " +
                                  std::to_string(id));
  }
}

}  // namespace lake
