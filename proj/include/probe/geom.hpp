#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace probe {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Tolerance policy shared by every predicate in the library.
///
/// `len` and `area` are relative to the scene diameter (resp. its square);
/// the remaining values are absolute in scene length units.
struct Tolerance {
  double len = 1e-12;
  double area = 1e-12;
  double unit = 1e-9;
  double residual = 1e-10;
  double incidence = 1e-8;

  /// Throws std::invalid_argument when a value is non-positive or when
  /// incidence < residual.
  void validate() const;
};

struct Segment3 {
  Vec3 u;
  Vec3 v;

  Vec3 direction() const { return v - u; }
  double length() const { return (v - u).norm(); }
  Vec3 at(double t) const { return u + t * (v - u); }
};

struct Segment2 {
  Vec2 u;
  Vec2 v;

  Vec2 direction() const { return v - u; }
  double length() const { return (v - u).norm(); }
  Vec2 at(double t) const { return u + t * (v - u); }
};

struct Line3 {
  Vec3 point;
  Vec3 dir;  // not necessarily unit

  static Line3 through(const Vec3& a, const Vec3& b) { return {a, b - a}; }
  static Line3 of(const Segment3& s) { return {s.u, s.v - s.u}; }
};

struct Triangle3 {
  std::array<Vec3, 3> v;

  Vec3 raw_normal() const { return (v[1] - v[0]).cross(v[2] - v[0]); }
  Vec3 unit_normal() const { return raw_normal().normalized(); }
  double area() const { return 0.5 * raw_normal().norm(); }
  Segment3 edge(int i) const { return {v[i], v[(i + 1) % 3]}; }
  Vec3 centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }
};

struct Circle2 {
  Vec2 center;
  double radius;
};

struct Sphere3 {
  Vec3 center;
  double radius;
};

/// Orientation angles of a plane through the origin. The normal is
/// (sin I sin Ω, -sin I cos Ω, cos I); canonical values lie in [0, π).
struct PlaneAngles {
  double inclination = 0.0;  // I
  double node = 0.0;         // Ω
};

/// Plane {x : normal · x = offset} with unit normal.
struct Plane3 {
  Vec3 normal{0, 0, 1};
  double offset = 0.0;

  static Plane3 from_point_normal(const Vec3& point, const Vec3& normal);
  static Plane3 from_points(const Vec3& a, const Vec3& b, const Vec3& c);
  static Plane3 from_angles(PlaneAngles angles);

  double signed_distance(const Vec3& x) const { return normal.dot(x) - offset; }
  bool passes_through_origin(double tol) const { return std::abs(offset) <= tol; }

  /// Canonical (I, Ω) of a plane through the origin; the normal sign is
  /// ignored.
  PlaneAngles angles() const;
  /// The canonical normal orientation matching angles().
  Vec3 canonical_normal() const;
};

/// In-plane Cartesian frame of a plane through the origin. x' is the line
/// of nodes (cos Ω, sin Ω, 0), y' = n × x', with n the canonical normal.
struct PlaneFrame {
  Vec3 normal;
  Vec3 x_axis;
  Vec3 y_axis;

  static PlaneFrame of(const Plane3& plane);
  static PlaneFrame from_angles(PlaneAngles angles);

  Vec2 to_local(const Vec3& p) const { return {p.dot(x_axis), p.dot(y_axis)}; }
  Vec3 to_world(const Vec2& p) const { return p.x() * x_axis + p.y() * y_axis; }
};

double cross2(const Vec2& a, const Vec2& b);

// Distances and closest points.
Vec3 closest_point_on_segment(const Vec3& p, const Segment3& s, double* t_out = nullptr);
double point_segment_distance(const Vec3& p, const Segment3& s);
double point_segment_distance(const Vec2& p, const Segment2& s);
double point_line_distance(const Vec3& p, const Line3& line);
double segment_segment_distance(const Segment3& a, const Segment3& b);
double segment_segment_distance(const Segment2& a, const Segment2& b);
Vec3 closest_point_on_triangle(const Vec3& p, const Triangle3& tri);
double point_triangle_distance(const Vec3& p, const Triangle3& tri);
double segment_triangle_distance(const Segment3& s, const Triangle3& tri);
bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double tol);

/// Parameter t of line.point + t·line.dir on the plane, if not parallel.
std::optional<double> line_plane_parameter(const Line3& line, const Plane3& plane);
std::optional<Vec3> line_plane_intersection(const Line3& line, const Plane3& plane);

/// Closest points between two infinite lines: parameters (s, t) on a and b.
std::optional<std::pair<double, double>> line_line_closest(const Line3& a, const Line3& b);

/// Side operator of two lines; zero iff the lines are coplanar.
double line_side(const Line3& a, const Line3& b);

enum class ContactKind { kNone, kInterior, kBoundary, kCoplanar };

struct SegTriContact {
  ContactKind kind = ContactKind::kNone;
  Vec3 point = Vec3::Zero();

  bool hit() const { return kind != ContactKind::kNone; }
};

/// Segment vs closed triangle. Interior: proper stab through the relative
/// interior with margin > tol. Boundary: any other contact within tol.
/// Coplanar: segment lies in the triangle plane (within tol) and touches it.
SegTriContact seg_triangle_intersect(const Segment3& s, const Triangle3& tri, double tol);

/// True when the segment passes through the relative interior of the
/// triangle by more than `margin` (grazing contacts excluded).
bool seg_triangle_stabs(const Segment3& s, const Triangle3& tri, double margin);

enum class SectionKind { kEmpty, kPoint, kSegment, kCoplanar };

struct CrossSection {
  SectionKind kind = SectionKind::kEmpty;
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();

  Segment3 segment() const { return {a, b}; }
};

CrossSection tri_plane_cross_section(const Triangle3& tri, const Plane3& plane, double tol);

struct ClippedPiece {
  Segment2 segment;
  bool inside;
};

/// Splits s at its crossings with the circle. Pieces are returned in order
/// from s.u to s.v and share endpoints. A tangent contact does not create an
/// inside piece.
std::vector<ClippedPiece> clip_segment_by_circle(const Segment2& s, const Circle2& circle, double tol);

/// Rotates v about the unit axis by angle (right-hand rule).
Vec3 rotate_about(const Vec3& v, const Vec3& unit_axis, double angle);
Vec2 rotate2(const Vec2& v, double angle);

/// Any unit vector orthogonal to v.
Vec3 any_orthogonal(const Vec3& v);

}  // namespace probe
