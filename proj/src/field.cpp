#include "lake/field.hpp"

#include <algorithm>
#include <cmath>

namespace lake {

namespace {

// Catmull-Rom weights for the stencil {k-1, k, k+1, k+2} at fraction s
inline void cr_weights(double s, double w[4]) {
  double s2 = s * s, s3 = s2 * s;
  w[0] = 0.5 * (-s3 + 2.0 * s2 - s);
  w[1] = 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0);
  w[2] = 0.5 * (-3.0 * s3 + 4.0 * s2 + s);
  w[3] = 0.5 * (s3 - s2);
}

// quadratic extrapolation ghost from the three nearest rows
inline double ghost3(double f0, double f1, double f2) {
  return 3.0 * f0 - 3.0 * f1 + f2;
}

struct StencilPos {
  int cell;  // base index k: point lies between nodes k and k+1
  double s;  // fraction in [0,1]
};

inline StencilPos locate(double u, int node_count, bool periodic) {
  StencilPos sp;
  if (periodic) {
    double w = std::floor(u);
    sp.cell = static_cast<int>(w) % node_count;
    if (sp.cell < 0) sp.cell += node_count;
    sp.s = u - w;
  } else {
    int k = static_cast<int>(std::floor(u));
    k = std::clamp(k, 0, node_count - 2);
    sp.cell = k;
    sp.s = std::clamp(u - k, 0.0, 1.0);
  }
  return sp;
}

inline void grid_coords(const Grid& g, const Vec2& p, double& u1, double& u2) {
  if (g.kind == GridKind::Cartesian) {
    u1 = (p.x() - g.a1) / g.h1;
    u2 = (p.y() - g.a2) / g.h2;
  } else {
    double r = p.norm();
    double t = std::atan2(p.y(), p.x());
    if (t < 0.0) t += 2.0 * M_PI;
    u1 = (r - g.a1) / g.h1;
    u2 = t / g.h2;
  }
}

// Gather the 4x4 logical stencil node ids / ghost codes around a point.
// Entries with id >= 0 are plain nodes; GhostLow/GhostHigh mark radial or
// Cartesian edge ghosts built from the three nearest rows.
struct Stencil {
  double w1[4], w2[4];
  // per (a,c): either a node id, or -1/-2 for low/high ghost along axis 1
  int id[4][4];
  int col[4];  // wrapped axis-2 indices used by ghost reconstruction
};

inline void build_stencil(const Grid& g, const Vec2& p, Stencil& st) {
  double u1, u2;
  grid_coords(g, p, u1, u2);
  StencilPos p1 = locate(u1, g.n1, false);
  StencilPos p2 = locate(u2, g.n2, g.periodic2());
  cr_weights(p1.s, st.w1);
  cr_weights(p2.s, st.w2);
  const int last = g.n1 - 1;
  for (int c = 0; c < 4; ++c) {
    int i2 = p2.cell - 1 + c;
    if (g.periodic2()) {
      i2 %= g.n2;
      if (i2 < 0) i2 += g.n2;
    } else {
      i2 = std::clamp(i2, 0, g.n2 - 1);
    }
    st.col[c] = i2;
  }
  for (int a = 0; a < 4; ++a) {
    int i1 = p1.cell - 1 + a;
    for (int c = 0; c < 4; ++c) {
      if (i1 < 0) {
        if (g.kind == GridKind::PolarDisk)  // straight through the axis
          st.id[a][c] = g.node_id(-i1, st.col[c] + g.n2 / 2);
        else
          st.id[a][c] = -1;
      } else if (i1 > last) {
        st.id[a][c] = -2;
      } else {
        st.id[a][c] = g.node_id(i1, st.col[c]);
      }
    }
  }
}

template <bool Clip>
inline double apply_stencil(const Grid& g, const Eigen::ArrayXd& v,
                            const Stencil& st) {
  double vals[4][4];
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c) {
      int id = st.id[a][c];
      if (id >= 0) {
        vals[a][c] = v[id];
      } else if (id == -1) {
        vals[a][c] = ghost3(v[g.node_id(0, st.col[c])], v[g.node_id(1, st.col[c])],
                            v[g.node_id(2, st.col[c])]);
      } else {
        int last = g.n1 - 1;
        vals[a][c] =
            ghost3(v[g.node_id(last, st.col[c])], v[g.node_id(last - 1, st.col[c])],
                   v[g.node_id(last - 2, st.col[c])]);
      }
    }
  double result = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = st.w2[0] * vals[a][0] + st.w2[1] * vals[a][1] +
                 st.w2[2] * vals[a][2] + st.w2[3] * vals[a][3];
    result += st.w1[a] * row;
  }
  if constexpr (Clip) {
    double lo = vals[0][0], hi = vals[0][0];
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        lo = std::min(lo, vals[a][c]);
        hi = std::max(hi, vals[a][c]);
      }
    result = std::clamp(result, lo, hi);
  }
  return result;
}

}  // namespace

double interpolate(const ScalarField& f, const Vec2& p, bool clip) {
  Stencil st;
  build_stencil(*f.grid, p, st);
  return clip ? apply_stencil<true>(*f.grid, f.values, st)
              : apply_stencil<false>(*f.grid, f.values, st);
}

Vec2 interpolate(const VelocityField& u, const Vec2& p) {
  Stencil st;
  build_stencil(*u.grid, p, st);
  return Vec2(apply_stencil<false>(*u.grid, u.ux, st),
              apply_stencil<false>(*u.grid, u.uy, st));
}

double integrate(const ScalarField& f) {
  return (f.values * f.grid->measures.array()).sum();
}

double integrate_product(const ScalarField& f, const ScalarField& g) {
  return (f.values * g.values * f.grid->measures.array()).sum();
}

Vec2 clamp_into_domain(const DomainSpec& spec, const Vec2& p,
                       double* clamped_distance) {
  Vec2 q = p;
  switch (spec.kind) {
    case DomainKind::UnitDisk: {
      double r = p.norm();
      if (r > 1.0) q = p / r;
      break;
    }
    case DomainKind::Rectangle: {
      q.x() = std::clamp(p.x(), -0.5 * spec.width, 0.5 * spec.width);
      q.y() = std::clamp(p.y(), -0.5 * spec.height, 0.5 * spec.height);
      break;
    }
    case DomainKind::Annulus: {
      double r = p.norm();
      if (r > 1.0)
        q = p / r;
      else if (r < spec.inner_radius)
        q = r > 0.0 ? Vec2(p * (spec.inner_radius / r))
                    : Vec2(spec.inner_radius, 0.0);
      break;
    }
  }
  if (clamped_distance) *clamped_distance += (q - p).norm();
  return q;
}

}  // namespace lake
