#include "probe/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace probe {

void Tolerance::validate() const {
  if (!(len > 0) || !(area > 0) || !(unit > 0) || !(residual > 0) || !(incidence > 0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
  if (incidence < residual) {
    throw std::invalid_argument("tol_incidence must be >= tol_residual");
  }
}

Plane3 Plane3::from_point_normal(const Vec3& point, const Vec3& normal) {
  Plane3 p;
  p.normal = normal.normalized();
  p.offset = p.normal.dot(point);
  return p;
}

Plane3 Plane3::from_points(const Vec3& a, const Vec3& b, const Vec3& c) {
  return from_point_normal(a, (b - a).cross(c - a));
}

Plane3 Plane3::from_angles(PlaneAngles angles) {
  const double si = std::sin(angles.inclination);
  Plane3 p;
  p.normal = Vec3(si * std::sin(angles.node), -si * std::cos(angles.node), std::cos(angles.inclination));
  p.offset = 0.0;
  return p;
}

PlaneAngles Plane3::angles() const {
  Vec3 n = normal.normalized();
  const double horizontal = std::hypot(n.x(), n.y());
  if (horizontal < 1e-15) {
    return {0.0, 0.0};
  }
  // Normals within roundoff of the Ω = 0 boundary all take the y < 0 side;
  // an exact zero test flips the orientation on one-ulp changes.
  constexpr double kSnap = 1e-12;
  if (n.x() < -kSnap || (std::abs(n.x()) <= kSnap && n.y() > 0.0)) {
    n = -n;
  }
  PlaneAngles a;
  a.inclination = std::acos(std::clamp(n.z(), -1.0, 1.0));
  a.node = std::atan2(n.x(), -n.y());
  if (a.node >= kPi || a.node < 0.0) a.node = 0.0;
  if (a.inclination >= kPi) a.inclination = 0.0;
  return a;
}

Vec3 Plane3::canonical_normal() const { return from_angles(angles()).normal; }

PlaneFrame PlaneFrame::from_angles(PlaneAngles angles) {
  PlaneFrame f;
  f.normal = Plane3::from_angles(angles).normal;
  f.x_axis = Vec3(std::cos(angles.node), std::sin(angles.node), 0.0);
  f.y_axis = f.normal.cross(f.x_axis);
  return f;
}

PlaneFrame PlaneFrame::of(const Plane3& plane) { return from_angles(plane.angles()); }

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec3 closest_point_on_segment(const Vec3& p, const Segment3& s, double* t_out) {
  const Vec3 d = s.v - s.u;
  const double dd = d.squaredNorm();
  double t = dd > 0 ? (p - s.u).dot(d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return s.u + t * d;
}

double point_segment_distance(const Vec3& p, const Segment3& s) {
  return (p - closest_point_on_segment(p, s)).norm();
}

double point_segment_distance(const Vec2& p, const Segment2& s) {
  const Vec2 d = s.v - s.u;
  const double dd = d.squaredNorm();
  double t = dd > 0 ? (p - s.u).dot(d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (s.u + t * d)).norm();
}

double point_line_distance(const Vec3& p, const Line3& line) {
  const double dn = line.dir.norm();
  return (p - line.point).cross(line.dir).norm() / dn;
}

namespace {

// Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
double closest_segment_segment(const Segment3& a, const Segment3& b, Vec3* pa, Vec3* pb) {
  const Vec3 d1 = a.v - a.u;
  const Vec3 d2 = b.v - b.u;
  const Vec3 r = a.u - b.u;
  const double aa = d1.squaredNorm();
  const double ee = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  constexpr double kEps = 1e-300;
  if (aa <= kEps && ee <= kEps) {
    s = t = 0.0;
  } else if (aa <= kEps) {
    s = 0.0;
    t = std::clamp(f / ee, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (ee <= kEps) {
      t = 0.0;
      s = std::clamp(-c / aa, 0.0, 1.0);
    } else {
      const double bb = d1.dot(d2);
      const double denom = aa * ee - bb * bb;
      if (denom > 1e-14 * aa * ee) {
        s = std::clamp((bb * f - c * ee) / denom, 0.0, 1.0);
      } else {
        s = 0.0;
      }
      t = (bb * s + f) / ee;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / aa, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((bb - c) / aa, 0.0, 1.0);
      }
    }
  }
  const Vec3 c1 = a.u + s * d1;
  const Vec3 c2 = b.u + t * d2;
  if (pa) *pa = c1;
  if (pb) *pb = c2;
  return (c1 - c2).norm();
}

}  // namespace

double segment_segment_distance(const Segment3& a, const Segment3& b) {
  return closest_segment_segment(a, b, nullptr, nullptr);
}

double segment_segment_distance(const Segment2& a, const Segment2& b) {
  const Vec2 da = a.v - a.u;
  const Vec2 db = b.v - b.u;
  const double o1 = cross2(da, b.u - a.u);
  const double o2 = cross2(da, b.v - a.u);
  const double o3 = cross2(db, a.u - b.u);
  const double o4 = cross2(db, a.v - b.u);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return 0.0;
  }
  return std::min({point_segment_distance(a.u, b), point_segment_distance(a.v, b),
                   point_segment_distance(b.u, a), point_segment_distance(b.v, a)});
}

Vec3 closest_point_on_triangle(const Vec3& p, const Triangle3& tri) {
  // Ericson 5.1.5, Voronoi region walk.
  const Vec3& a = tri.v[0];
  const Vec3& b = tri.v[1];
  const Vec3& c = tri.v[2];
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    return a + (d1 / (d1 - d3)) * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    return a + (d2 / (d2 - d6)) * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_triangle_distance(const Vec3& p, const Triangle3& tri) {
  return (p - closest_point_on_triangle(p, tri)).norm();
}

namespace {

// Minimum signed distance from an in-plane point to the three edge lines,
// positive inside.
double inside_margin(const Vec3& p, const Triangle3& tri, const Vec3& unit_n) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = tri.v[(i + 1) % 3] - tri.v[i];
    const double len = e.norm();
    const double s = e.cross(p - tri.v[i]).dot(unit_n) / len;
    m = std::min(m, s);
  }
  return m;
}

}  // namespace

double segment_triangle_distance(const Segment3& s, const Triangle3& tri) {
  const Vec3 n = tri.unit_normal();
  const double d0 = n.dot(s.u - tri.v[0]);
  const double d1 = n.dot(s.v - tri.v[0]);
  if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
    const Vec3 p = s.u + (d0 / (d0 - d1)) * (s.v - s.u);
    if (inside_margin(p, tri, n) >= 0.0) return 0.0;
  }
  double best = std::min(point_triangle_distance(s.u, tri), point_triangle_distance(s.v, tri));
  for (int i = 0; i < 3; ++i) {
    best = std::min(best, segment_segment_distance(s, tri.edge(i)));
  }
  return best;
}

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double tol) {
  const double orient = cross2(b - a, c - a);
  const double sgn = orient >= 0 ? 1.0 : -1.0;
  const Vec2 pts[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = pts[(i + 1) % 3] - pts[i];
    const double len = e.norm();
    if (sgn * cross2(e, p - pts[i]) / len < -tol) return false;
  }
  return true;
}

std::optional<double> line_plane_parameter(const Line3& line, const Plane3& plane) {
  const double denom = plane.normal.dot(line.dir);
  if (std::abs(denom) <= 1e-15 * line.dir.norm()) return std::nullopt;
  return (plane.offset - plane.normal.dot(line.point)) / denom;
}

std::optional<Vec3> line_plane_intersection(const Line3& line, const Plane3& plane) {
  const auto t = line_plane_parameter(line, plane);
  if (!t) return std::nullopt;
  return line.point + *t * line.dir;
}

std::optional<std::pair<double, double>> line_line_closest(const Line3& a, const Line3& b) {
  const Vec3 r = a.point - b.point;
  const double aa = a.dir.squaredNorm();
  const double bb = a.dir.dot(b.dir);
  const double ee = b.dir.squaredNorm();
  const double c = a.dir.dot(r);
  const double f = b.dir.dot(r);
  const double denom = aa * ee - bb * bb;
  if (denom <= 1e-14 * aa * ee) return std::nullopt;
  const double s = (bb * f - c * ee) / denom;
  const double t = (aa * f - bb * c) / denom;
  return std::make_pair(s, t);
}

double line_side(const Line3& a, const Line3& b) {
  // d_a · m_b + d_b · m_a with m = p × d.
  return a.dir.dot(b.point.cross(b.dir)) + b.dir.dot(a.point.cross(a.dir));
}

SegTriContact seg_triangle_intersect(const Segment3& s, const Triangle3& tri, double tol) {
  SegTriContact out;
  const Vec3 n = tri.unit_normal();
  const double d0 = n.dot(s.u - tri.v[0]);
  const double d1 = n.dot(s.v - tri.v[0]);
  if (std::abs(d0) <= tol && std::abs(d1) <= tol) {
    if (segment_triangle_distance(s, tri) <= tol) {
      out.kind = ContactKind::kCoplanar;
      const Vec3 cu = closest_point_on_triangle(s.u, tri);
      out.point = (cu - s.u).norm() <= tol ? s.u : closest_point_on_segment(tri.centroid(), s);
    }
    return out;
  }
  if ((d0 > tol && d1 > tol) || (d0 < -tol && d1 < -tol)) return out;
  const bool crosses = (d0 > tol && d1 < -tol) || (d0 < -tol && d1 > tol);
  if (crosses) {
    const Vec3 p = s.u + (d0 / (d0 - d1)) * (s.v - s.u);
    const double margin = inside_margin(p, tri, n);
    if (margin > tol) {
      out.kind = ContactKind::kInterior;
      out.point = p;
      return out;
    }
    if (segment_triangle_distance(s, tri) <= tol) {
      out.kind = ContactKind::kBoundary;
      out.point = margin >= -tol ? p : closest_point_on_segment(closest_point_on_triangle(p, tri), s);
    }
    return out;
  }
  if (segment_triangle_distance(s, tri) <= tol) {
    out.kind = ContactKind::kBoundary;
    out.point = std::abs(d0) <= tol ? s.u : s.v;
  }
  return out;
}

bool seg_triangle_stabs(const Segment3& s, const Triangle3& tri, double margin) {
  const Vec3 n = tri.unit_normal();
  const double d0 = n.dot(s.u - tri.v[0]);
  const double d1 = n.dot(s.v - tri.v[0]);
  if (!((d0 > margin && d1 < -margin) || (d0 < -margin && d1 > margin))) return false;
  const Vec3 p = s.u + (d0 / (d0 - d1)) * (s.v - s.u);
  return inside_margin(p, tri, n) > margin;
}

CrossSection tri_plane_cross_section(const Triangle3& tri, const Plane3& plane, double tol) {
  CrossSection out;
  double d[3];
  bool on[3];
  for (int i = 0; i < 3; ++i) {
    d[i] = plane.signed_distance(tri.v[i]);
    on[i] = std::abs(d[i]) <= tol;
  }
  if (on[0] && on[1] && on[2]) {
    out.kind = SectionKind::kCoplanar;
    return out;
  }
  Vec3 pts[3];
  int count = 0;
  for (int i = 0; i < 3; ++i) {
    if (on[i]) pts[count++] = tri.v[i];
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (on[i] || on[j]) continue;
    if ((d[i] > 0) != (d[j] > 0)) {
      const double t = d[i] / (d[i] - d[j]);
      pts[count++] = tri.v[i] + t * (tri.v[j] - tri.v[i]);
    }
  }
  if (count == 0) return out;
  if (count == 1 || (pts[0] - pts[1]).norm() <= tol) {
    out.kind = SectionKind::kPoint;
    out.a = out.b = pts[0];
    return out;
  }
  out.kind = SectionKind::kSegment;
  out.a = pts[0];
  out.b = pts[1];
  return out;
}

std::vector<ClippedPiece> clip_segment_by_circle(const Segment2& s, const Circle2& circle, double tol) {
  std::vector<ClippedPiece> out;
  const Vec2 dir = s.v - s.u;
  const Vec2 w = s.u - circle.center;
  const double a = dir.squaredNorm();
  const double b = 2.0 * w.dot(dir);
  const double c = w.squaredNorm() - circle.radius * circle.radius;
  const double disc = b * b - 4.0 * a * c;
  const double len = std::sqrt(a);
  if (a <= 0.0) {
    out.push_back({s, c < 0.0});
    return out;
  }
  // Half chord length along s; a touching line gives no inside piece.
  const double half_chord = disc > 0 ? std::sqrt(disc) / (2.0 * a) * len : 0.0;
  if (disc <= 0.0 || half_chord <= tol) {
    out.push_back({s, false});
    return out;
  }
  const double sq = std::sqrt(disc);
  const double t1 = (-b - sq) / (2.0 * a);
  const double t2 = (-b + sq) / (2.0 * a);
  const double eps = tol / len;
  if (t2 <= eps || t1 >= 1.0 - eps) {
    out.push_back({s, false});
    return out;
  }
  Vec2 cursor = s.u;
  if (t1 > eps) {
    const Vec2 p = s.at(t1);
    out.push_back({{cursor, p}, false});
    cursor = p;
  }
  if (t2 < 1.0 - eps) {
    const Vec2 p = s.at(t2);
    out.push_back({{cursor, p}, true});
    out.push_back({{p, s.v}, false});
  } else {
    out.push_back({{cursor, s.v}, true});
  }
  return out;
}

Vec3 rotate_about(const Vec3& v, const Vec3& k, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + k.cross(v) * s + k * (k.dot(v)) * (1.0 - c);
}

Vec2 rotate2(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

Vec3 any_orthogonal(const Vec3& v) {
  const Vec3 axis = std::abs(v.x()) < 0.9 * v.norm() ? Vec3::UnitX() : Vec3::UnitY();
  return v.cross(axis).normalized();
}

}  // namespace probe
