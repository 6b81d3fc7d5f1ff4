#include "probe/feasibility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace probe {

using nlohmann::json;

Sense parse_sense(const std::string& s) {
  if (s == "cw") return Sense::kCw;
  if (s == "ccw") return Sense::kCcw;
  throw std::invalid_argument("sense must be cw or ccw");
}

const char* to_string(Sense s) { return s == Sense::kCw ? "cw" : "ccw"; }

const char* to_string(Stage s) { return s == Stage::kInsertion ? "insertion" : "sector"; }

Vec3 Trajectory::entry(double r, double big_r) const {
  const double bd = b.dot(d);
  const double len = bd + std::sqrt(std::max(0.0, bd * bd + big_r * big_r - r * r));
  return b - len * d;
}

Plane3 Trajectory::plane() const {
  const Vec3 n = b.cross(d);
  if (n.norm() <= 1e-12 * b.norm()) return Plane3::from_point_normal(Vec3::Zero(), any_orthogonal(b));
  return Plane3::from_point_normal(Vec3::Zero(), n);
}

Trajectory make_trajectory(const Vec3& b, const Vec3& d) {
  Trajectory t;
  t.b = b;
  t.d = d.normalized();
  const Vec3 toward = -b.normalized();
  t.rho = std::atan2(t.d.cross(toward).norm(), t.d.dot(toward));
  const Vec3 n = t.plane().canonical_normal();
  t.sense = t.d.cross(toward).dot(n) >= 0.0 ? Sense::kCcw : Sense::kCw;
  return t;
}

Trajectory unarticulated(const Vec3& u, double r) {
  const Vec3 w = u.normalized();
  Trajectory t;
  t.b = r * w;
  t.d = -w;
  t.rho = 0.0;
  t.sense = Sense::kCcw;
  return t;
}

void check_trajectory(const Trajectory& t, double r, const Tolerance& tol) {
  if (!t.b.allFinite() || !t.d.allFinite() || !std::isfinite(t.rho)) {
    throw InvalidTrajectory("non-finite trajectory value");
  }
  if (std::abs(t.b.norm() - r) > tol.incidence) throw InvalidTrajectory("elbow is not on the sphere of radius r");
  if (std::abs(t.d.norm() - 1.0) > tol.unit) throw InvalidTrajectory("insertion direction is not a unit vector");
  if (t.rho < -tol.incidence || t.rho > kHalfPi + tol.incidence) {
    throw InvalidTrajectory("rotation angle outside [0, pi/2]");
  }
  const Trajectory derived = make_trajectory(t.b, t.d);
  if (std::abs(derived.rho - t.rho) > tol.incidence) {
    throw InvalidTrajectory("rotation angle does not match the elbow geometry");
  }
  if (derived.rho > tol.incidence && derived.sense != t.sense) {
    throw InvalidTrajectory("rotation sense does not match the elbow geometry");
  }
}

Sector2 Sector2::at(const Vec2& b, const Vec2& t, double rho, Sense sense) {
  const Vec2 bt = (t - b).normalized();
  const Vec2 start = rotate2(bt, sense == Sense::kCcw ? -rho : rho);
  return {b, start, bt, (t - b).norm()};
}

namespace {

// Bounding radii in counter-clockwise order.
std::pair<Vec2, Vec2> ordered(const Sector2& s) {
  if (cross2(s.start, s.end) >= 0.0) return {s.start, s.end};
  return {s.end, s.start};
}

bool in_wedge(const Vec2& u0, const Vec2& u1, const Vec2& w, double tol) {
  return cross2(u0, w) >= -tol && cross2(w, u1) >= -tol && w.dot(u0 + u1) >= -tol;
}

}  // namespace

bool point_in_sector_2d(const Sector2& sector, const Vec2& p, double tol) {
  const Vec2 w = p - sector.apex;
  const double n = w.norm();
  if (n <= tol) return true;
  if (n > sector.radius + tol) return false;
  const auto [u0, u1] = ordered(sector);
  return in_wedge(u0, u1, w, tol);
}

bool sector_segment_intersect_2d(const Sector2& sector, const Segment2& s, double tol) {
  if (point_in_sector_2d(sector, s.u, tol) || point_in_sector_2d(sector, s.v, tol)) return true;
  const auto [u0, u1] = ordered(sector);
  const Segment2 r0{sector.apex, sector.apex + sector.radius * u0};
  const Segment2 r1{sector.apex, sector.apex + sector.radius * u1};
  if (segment_segment_distance(s, r0) <= tol || segment_segment_distance(s, r1) <= tol) return true;
  // Crossings with the (inflated) arc.
  const Vec2 q = s.u - sector.apex;
  const Vec2 e = s.v - s.u;
  const double rr = sector.radius + tol;
  const double a = e.squaredNorm();
  if (a == 0.0) return false;
  const double bq = q.dot(e);
  const double c = q.squaredNorm() - rr * rr;
  const double disc = bq * bq - a * c;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  for (double t : {(-bq - sq) / a, (-bq + sq) / a}) {
    if (t < 0.0 || t > 1.0) continue;
    if (in_wedge(u0, u1, q + t * e, tol)) return true;
  }
  return false;
}

bool sector_segment_overlap_2d(const Sector2& sector, const Segment2& s, double margin) {
  const double len = s.length();
  if (len <= 2.0 * margin) return false;
  const Vec2 dir = s.direction() / len;
  const Vec2 p0 = s.u + margin * dir - sector.apex;
  const Vec2 e = (len - 2.0 * margin) * dir;
  double lo = 0.0, hi = 1.0;
  // Half-plane a + b t >= m.
  auto clip = [&](double a, double b, double m) {
    if (std::abs(b) < 1e-300) {
      if (a < m) hi = -1.0;
      return;
    }
    const double t = (m - a) / b;
    if (b > 0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
  };
  const auto [u0, u1] = ordered(sector);
  clip(cross2(u0, p0), cross2(u0, e), margin);
  clip(cross2(p0, u1), cross2(e, u1), margin);
  clip(p0.dot(u0 + u1), e.dot(u0 + u1), margin);
  if (lo >= hi) return false;
  const double rr = sector.radius - margin;
  if (rr <= 0.0) return false;
  const double a = e.squaredNorm();
  const double bq = p0.dot(e);
  const double c = p0.squaredNorm() - rr * rr;
  const double disc = bq * bq - a * c;
  if (disc <= 0.0) return false;
  const double sq = std::sqrt(disc);
  lo = std::max(lo, (-bq - sq) / a);
  hi = std::min(hi, (-bq + sq) / a);
  return lo < hi;
}

CircularSector CircularSector::of(const Trajectory& t, double r) {
  CircularSector s;
  s.apex = t.b;
  s.frame = PlaneFrame::of(t.plane());
  s.start = t.d;
  s.end = -t.b.normalized();
  s.radius = r;
  s.angle = t.rho;
  return s;
}

Sector2 CircularSector::local() const {
  return {frame.to_local(apex), frame.to_local(start).normalized(), frame.to_local(end).normalized(), radius};
}

namespace {

bool coplanar_triangle_hits(const Sector2& sector, const std::array<Vec2, 3>& p, double tol) {
  for (int i = 0; i < 3; ++i) {
    if (sector_segment_intersect_2d(sector, {p[i], p[(i + 1) % 3]}, tol)) return true;
  }
  return point_in_triangle_2d(sector.apex, p[0], p[1], p[2], tol);
}

}  // namespace

bool sector_triangle_intersect(const CircularSector& sector, const Triangle3& tri, double tol) {
  const Plane3 plane{sector.frame.normal, 0.0};
  const CrossSection cs = tri_plane_cross_section(tri, plane, tol);
  const Sector2 s2 = sector.local();
  switch (cs.kind) {
    case SectionKind::kEmpty:
      return false;
    case SectionKind::kPoint:
      return point_in_sector_2d(s2, sector.frame.to_local(cs.a), tol);
    case SectionKind::kSegment:
      return sector_segment_intersect_2d(s2, {sector.frame.to_local(cs.a), sector.frame.to_local(cs.b)}, tol);
    case SectionKind::kCoplanar: {
      std::array<Vec2, 3> p;
      for (int i = 0; i < 3; ++i) p[i] = sector.frame.to_local(tri.v[i]);
      return coplanar_triangle_hits(s2, p, tol);
    }
  }
  return false;
}

namespace {

bool near_segment(const TriangleCache& c, const Segment3& s, double tol) {
  return point_segment_distance(c.center, s) <= c.radius + tol;
}

bool near_sector(const TriangleCache& c, const CircularSector& s, double tol) {
  if ((c.center - s.apex).norm() > s.radius + c.radius + tol) return false;
  return std::abs(s.frame.normal.dot(c.center)) <= c.radius + tol;
}

}  // namespace

Verdict verify_trajectory(const Scene& scene, const Trajectory& t) {
  const Tolerance& tol = scene.tolerance();
  check_trajectory(t, scene.r(), tol);
  Verdict v;
  const Segment3 ins = t.insertion(scene.r(), scene.big_r());
  const auto& tris = scene.triangles();
  const auto& cache = scene.cache();
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (!near_segment(cache[i], ins, tol.incidence)) continue;
    const SegTriContact c = seg_triangle_intersect(ins, tris[i], tol.incidence);
    if (c.hit()) {
      v.feasible = false;
      v.stage = Stage::kInsertion;
      v.witness = static_cast<int>(i);
      v.contact = c.point + scene.target();
      return v;
    }
  }
  if (t.rho <= 0.0) return v;
  const CircularSector sec = CircularSector::of(t, scene.r());
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (!near_sector(cache[i], sec, tol.incidence)) continue;
    if (sector_triangle_intersect(sec, tris[i], tol.incidence)) {
      v.feasible = false;
      v.stage = Stage::kSector;
      v.witness = static_cast<int>(i);
      const CrossSection cs = tri_plane_cross_section(tris[i], Plane3{sec.frame.normal, 0.0}, tol.incidence);
      v.contact = (cs.kind == SectionKind::kEmpty || cs.kind == SectionKind::kCoplanar ? tris[i].centroid() : cs.a) +
                  scene.target();
      return v;
    }
  }
  return v;
}

bool verify_touching(const Scene& scene, const Trajectory& t, double margin) {
  const Segment3 ins = t.insertion(scene.r(), scene.big_r());
  const auto& tris = scene.triangles();
  const auto& cache = scene.cache();
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (!near_segment(cache[i], ins, 0.0)) continue;
    if (seg_triangle_stabs(ins, tris[i], margin)) return false;
  }
  if (t.rho <= margin) return true;
  const CircularSector sec = CircularSector::of(t, scene.r());
  const Sector2 s2 = sec.local();
  const Plane3 plane{sec.frame.normal, 0.0};
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (!near_sector(cache[i], sec, 0.0)) continue;
    const CrossSection cs = tri_plane_cross_section(tris[i], plane, 0.0);
    if (cs.kind == SectionKind::kSegment) {
      if (sector_segment_overlap_2d(s2, {sec.frame.to_local(cs.a), sec.frame.to_local(cs.b)}, margin)) return false;
    } else if (cs.kind == SectionKind::kCoplanar) {
      std::array<Vec2, 3> p;
      for (int k = 0; k < 3; ++k) p[k] = sec.frame.to_local(tris[i].v[k]);
      for (int k = 0; k < 3; ++k) {
        if (sector_segment_overlap_2d(s2, {p[k], p[(k + 1) % 3]}, margin)) return false;
      }
      const Vec2 inner = s2.apex + 0.5 * s2.radius * (s2.start + s2.end).normalized();
      if (point_in_triangle_2d(inner, p[0], p[1], p[2], -margin)) return false;
    }
  }
  return true;
}

namespace {

Vec3 gaussian3(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double x = g(rng);
  const double y = g(rng);
  const double z = g(rng);
  return {x, y, z};
}

Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v;
  do {
    v = gaussian3(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace

std::optional<Trajectory> retract(const Scene& scene, const Trajectory& t, std::uint64_t seed, int tries) {
  const double r = scene.r();
  std::mt19937_64 rng(seed);
  static constexpr std::array<double, 6> kScales = {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  const int per_scale = std::max(1, tries / static_cast<int>(kScales.size()));
  const bool straight = t.rho <= scene.tolerance().incidence;
  for (double scale : kScales) {
    for (int k = 0; k < per_scale; ++k) {
      Trajectory cand;
      if (straight && k % 2 == 0) {
        cand = unarticulated(t.b.normalized() + scale * gaussian3(rng), r);
      } else {
        const Vec3 b = r * (t.b / r + scale * gaussian3(rng)).normalized();
        const Vec3 d = t.d + scale * gaussian3(rng);
        cand = make_trajectory(b, d);
        if (cand.rho > kHalfPi) continue;
      }
      if (verify_trajectory(scene, cand).feasible) return cand;
    }
  }
  return std::nullopt;
}

std::optional<Trajectory> sample_feasible(const Scene& scene, long budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kHalfPi);
  const double r = scene.r();
  for (long i = 0; i < budget; ++i) {
    const Vec3 bhat = random_unit(rng);
    Vec3 w = gaussian3(rng);
    w -= w.dot(bhat) * bhat;
    const double rho = angle(rng);
    if (w.norm() < 1e-12) continue;
    w.normalize();
    const Trajectory t = make_trajectory(r * bhat, std::cos(rho) * (-bhat) + std::sin(rho) * w);
    if (verify_trajectory(scene, t).feasible) return t;
  }
  return std::nullopt;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
    throw SchemaError(std::string(key) + " must be an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[key][i].is_number()) throw SchemaError(std::string(key) + " must be an array of 3 numbers");
    v(i) = j[key][i].get<double>();
  }
  return v;
}

}  // namespace

json trajectory_to_json(const Trajectory& t, const Vec3& target) {
  return json{{"b", vec_json(t.b + target)}, {"d", vec_json(t.d)}, {"rho", t.rho}, {"sense", to_string(t.sense)}};
}

Trajectory trajectory_from_json(const json& j, const Vec3& target) {
  if (!j.is_object()) throw SchemaError("trajectory must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k != "b" && k != "d" && k != "rho" && k != "sense") throw SchemaError("unknown key: " + k);
  }
  Trajectory t;
  t.b = vec_from(j, "b") - target;
  t.d = vec_from(j, "d");
  if (!j.contains("rho") || !j["rho"].is_number()) throw SchemaError("rho must be a number");
  t.rho = j["rho"].get<double>();
  if (!j.contains("sense") || !j["sense"].is_string()) throw SchemaError("sense must be cw or ccw");
  try {
    t.sense = parse_sense(j["sense"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return t;
}

}  // namespace probe
