// Analytic depth functions b > 0 with exact gradients.
//
// Depth fields are closed forms (constant, affine, radial-quadratic, smooth
// compact bump) so that grad(b) and the perp gradient of 1/b carry no
// discretization error.  Perp convention throughout: perp(f) = (df/dx2,
// -df/dx1).
#pragma once

#include "lake/geometry.hpp"

namespace lake {

enum class BathymetryFamily { Constant, Affine, Radial, Bump };

struct BathymetryField {
  BathymetryFamily family = BathymetryFamily::Constant;
  double c0 = 1.0;          // base depth
  Vec2 slope = Vec2::Zero();  // affine: b = c0 + slope . x
  double c2 = 0.0;          // radial: b = c0 + c2 |x|^2
  double amplitude = 0.0;   // bump: b = c0 + amplitude * f((x-center)/width)
  Vec2 center = Vec2::Zero();
  double width = 1.0;

  double depth(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;

  // perp(1/b) = (-d2 b, d1 b) / b^2
  Vec2 perp_grad_inv(const Vec2& p) const {
    Vec2 g = gradient(p);
    double b = depth(p);
    return Vec2(-g.y(), g.x()) / (b * b);
  }

  // perp(ln b) = (d2 b, -d1 b) / b
  Vec2 perp_grad_log(const Vec2& p) const {
    Vec2 g = gradient(p);
    return Vec2(g.y(), -g.x()) / depth(p);
  }

  bool constant_depth() const {
    return family == BathymetryFamily::Constant ||
           (slope.isZero() && c2 == 0.0 && amplitude == 0.0);
  }

  static BathymetryField constant(double c0);
  static BathymetryField affine(double c0, const Vec2& slope);
  static BathymetryField radial(double c0, double c2);
  static BathymetryField bump(double c0, double amplitude, const Vec2& center,
                              double width);
};

// The reference C-infinity profile exp(1 - 1/(1 - |z|^2)) on |z| < 1,
// zero outside; f(0) = 1.
double smooth_bump(double s2);           // argument is |z|^2
double smooth_bump_ds2(double s2);       // derivative with respect to |z|^2

// Throws if depth is non-positive at any grid node.
void validate_positive_depth(const BathymetryField& b, const Grid& grid);

}  // namespace lake
