#pragma once

// Backward construction of extremal events: pick a trajectory, then build
// obstacle features touching the probe elements each case row asks for.
// The solver is expected to recover the chosen trajectory.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "probe/events.hpp"
#include "probe/geom.hpp"
#include "probe/scene.hpp"

namespace planted {

using probe::CaseId;
using probe::Segment3;
using probe::Trajectory;
using probe::Triangle3;
using probe::Vec3;

enum class Feature {
  kAB,      // edge crossing the insertion segment outside C
  kABPlane, // as kAB, lying in the sector plane
  kBC,      // edge crossing [b, c_int]
  kBT,      // edge crossing [b, t]
  kSV,      // vertex inside the sector
  kTan,     // edge tangent to the sphere about b, touch point on the arc
  kArc,     // edge crossing the sector plane on the arc
  kTanS,    // triangle tangent to that sphere on the arc
  kArcS,    // triangle whose trace in the sector plane is tangent to the arc
  kPV,      // vertex on the insertion segment
  kPE,      // edge crossing the insertion segment
  kBTV,     // vertex on [b, t]
  kWE,      // edge crossing the straight probe (unsplit)
};

inline std::vector<Feature> features_of(CaseId id) {
  using F = Feature;
  switch (id) {
    case CaseId::kU1: return {F::kPV};
    case CaseId::kU2: return {F::kWE, F::kWE};
    case CaseId::kA1: return {F::kAB, F::kBC, F::kBT, F::kSV};
    case CaseId::kA2: return {F::kAB, F::kBC, F::kBC, F::kBT};
    case CaseId::kA3: return {F::kAB, F::kBC, F::kBT, F::kBT};
    case CaseId::kA4: return {F::kAB, F::kBT, F::kSV, F::kSV};
    case CaseId::kA5: return {F::kAB, F::kBT, F::kBT, F::kSV};
    case CaseId::kA6: return {F::kAB, F::kAB, F::kBT, F::kSV};
    case CaseId::kA7: return {F::kAB, F::kAB, F::kBC, F::kSV};
    case CaseId::kA8: return {F::kAB, F::kAB, F::kBC, F::kBT};
    case CaseId::kA9: return {F::kAB, F::kAB, F::kBC, F::kBC};
    case CaseId::kA10: return {F::kAB, F::kAB, F::kBT, F::kBT};
    case CaseId::kA11: return {F::kAB, F::kAB, F::kSV, F::kSV};
    case CaseId::kA12: return {F::kAB, F::kAB, F::kAB, F::kBC};
    case CaseId::kA13: return {F::kAB, F::kAB, F::kAB, F::kBT};
    case CaseId::kA14: return {F::kAB, F::kAB, F::kAB, F::kSV};
    case CaseId::kA15: return {F::kAB, F::kAB, F::kAB, F::kAB};
    case CaseId::kA16: return {F::kAB, F::kBT, F::kTan};
    case CaseId::kA17: return {F::kABPlane, F::kBC, F::kBT, F::kTan};
    case CaseId::kA18: return {F::kAB, F::kBT, F::kSV, F::kTan};
    case CaseId::kA19: return {F::kAB, F::kBT, F::kBT, F::kTan};
    case CaseId::kA20: return {F::kAB, F::kAB, F::kBC, F::kArc};
    case CaseId::kA21: return {F::kABPlane, F::kAB, F::kBT, F::kTan};
    case CaseId::kA22: return {F::kAB, F::kAB, F::kSV, F::kArc};
    case CaseId::kA16S: return {F::kAB, F::kBT, F::kTanS};
    case CaseId::kA17S: return {F::kABPlane, F::kBC, F::kBT, F::kTanS};
    case CaseId::kA18S: return {F::kAB, F::kBT, F::kSV, F::kTanS};
    case CaseId::kA19S: return {F::kAB, F::kBT, F::kBT, F::kTanS};
    case CaseId::kA20S: return {F::kAB, F::kAB, F::kBC, F::kArcS};
    case CaseId::kA21S: return {F::kABPlane, F::kAB, F::kBT, F::kTanS};
    case CaseId::kA22S: return {F::kAB, F::kAB, F::kSV, F::kArcS};
    case CaseId::kAV1: return {F::kPV, F::kPV};
    case CaseId::kAV2: return {F::kPV, F::kPE, F::kPE};
    case CaseId::kAV3: return {F::kBTV, F::kPE, F::kPE};
    case CaseId::kAV4: return {F::kBTV, F::kPV};
    case CaseId::kAV5: return {F::kBTV, F::kSV, F::kPE};
    case CaseId::kAV6: return {F::kPV, F::kSV, F::kPE};
    case CaseId::kAV7: return {F::kBT, F::kPV, F::kPE};
    case CaseId::kAV8: return {F::kBT, F::kBT, F::kPV};
    case CaseId::kAV9: return {F::kPV, F::kBT, F::kSV};
    default: return {};
  }
}

struct Instance {
  probe::Scene scene;
  probe::ExtremalEvent event;
  Trajectory truth;
};

class Planter {
 public:
  explicit Planter(std::uint64_t seed) : rng_(seed) {}

  /// Builds one instance of the case row; nullopt if a support could not be
  /// matched to a piece (rare numerical edge cases).
  std::optional<Instance> plant(CaseId id, double r = 1.0, double big_r = 4.0) {
    const auto feats = features_of(id);
    const bool straight = id == CaseId::kU1 || id == CaseId::kU2;
    r_ = r;
    big_r_ = big_r;
    truth_ = random_trajectory(straight);
    tris_.clear();
    std::vector<Placed> placed;
    for (Feature f : feats) placed.push_back(place(f));
    probe::Scene scene(r, big_r, Vec3::Zero(), tris_);
    const auto ctx = probe::EventContext::of(scene);
    probe::ExtremalEvent ev;
    ev.id = id;
    ev.count = static_cast<std::uint8_t>(feats.size());
    for (std::size_t i = 0; i < feats.size(); ++i) {
      const auto s = resolve(scene, ctx, feats[i], placed[i]);
      if (!s) return std::nullopt;
      ev.supports[i] = *s;
    }
    return Instance{std::move(scene), ev, truth_};
  }

 private:
  struct Placed {
    int triangle;
    Vec3 point;  // contact point
  };

  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  Vec3 gaussian() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng_), n(rng_), n(rng_)};
  }
  Vec3 random_unit() { return gaussian().normalized(); }
  Vec3 random_orthogonal(const Vec3& a) {
    Vec3 g = gaussian();
    g -= g.dot(a.normalized()) * a.normalized();
    return g.normalized();
  }

  Trajectory random_trajectory(bool straight) {
    const Vec3 bhat = random_unit();
    if (straight) return probe::unarticulated(bhat, r_);
    const double rho = uniform(0.3, 1.4);
    const Vec3 w = random_orthogonal(bhat);
    return probe::make_trajectory(r_ * bhat, std::cos(rho) * (-bhat) + std::sin(rho) * w);
  }

  Vec3 normal() const { return truth_.b.cross(truth_.d).normalized(); }
  Vec3 entry() const { return truth_.entry(r_, big_r_); }

  // Point on the arc / inside the sector, as a fraction of the rotation.
  Vec3 sector_direction(double frac) const {
    return probe::rotate_about(truth_.d, normal(), frac * truth_.rho);
  }

  void add_edge_triangle(const Vec3& x, const Vec3& dir) {
    const double lo = uniform(0.15, 0.6) * r_;
    const double hi = uniform(0.15, 0.6) * r_;
    const Vec3 u = x - lo * dir;
    const Vec3 v = x + hi * dir;
    const Vec3 w = 0.5 * (u + v) + uniform(0.3, 0.6) * r_ * random_orthogonal(dir);
    tris_.push_back({{u, v, w}});
  }

  void add_vertex_triangle(const Vec3& p) {
    const Vec3 a = random_unit();
    const Vec3 b = random_orthogonal(a);
    tris_.push_back({{p, p + 0.3 * r_ * (a + 0.3 * b), p + 0.3 * r_ * (a - 0.3 * b)}});
  }

  Placed place(Feature f) {
    const Vec3 a = entry();
    const Vec3& b = truth_.b;
    const Vec3 c = truth_.c_int(r_);
    const int tri = static_cast<int>(tris_.size());
    Vec3 x;
    switch (f) {
      case Feature::kAB: x = a + uniform(0.1, 0.9) * (b - a); add_edge_triangle(x, random_unit()); break;
      case Feature::kABPlane: {
        x = a + uniform(0.1, 0.9) * (b - a);
        const Vec3 dir = probe::rotate_about(truth_.d, normal(), uniform(0.4, 2.7));
        add_edge_triangle(x, dir);
        break;
      }
      case Feature::kBC: x = b + uniform(0.1, 0.9) * (c - b); add_edge_triangle(x, random_unit()); break;
      case Feature::kBT: x = uniform(0.1, 0.9) * b; add_edge_triangle(x, random_unit()); break;
      case Feature::kPE: x = a + uniform(0.1, 0.9) * (c - a); add_edge_triangle(x, random_unit()); break;
      case Feature::kWE: x = a + uniform(0.05, 0.95) * (c - a); add_edge_triangle(x, random_unit()); break;
      case Feature::kSV: x = b + uniform(0.2, 0.8) * r_ * sector_direction(uniform(0.2, 0.8)); add_vertex_triangle(x); break;
      case Feature::kPV: x = a + uniform(0.05, 0.95) * (c - a); add_vertex_triangle(x); break;
      case Feature::kBTV: x = uniform(0.1, 0.9) * b; add_vertex_triangle(x); break;
      case Feature::kTan: {
        x = b + r_ * sector_direction(uniform(0.2, 0.8));
        add_edge_triangle(x, random_orthogonal(x - b));
        break;
      }
      case Feature::kArc: {
        x = b + r_ * sector_direction(uniform(0.2, 0.8));
        Vec3 dir = random_unit();
        if (std::abs(dir.dot(normal())) < 0.3) dir = (dir + normal()).normalized();
        add_edge_triangle(x, dir);
        break;
      }
      case Feature::kTanS: {
        x = b + r_ * sector_direction(uniform(0.2, 0.8));
        const Vec3 n = (x - b).normalized();
        const Vec3 e1 = random_orthogonal(n);
        const Vec3 e2 = n.cross(e1);
        const double s = 0.3 * r_;
        tris_.push_back({{x + s * e1, x + s * (-0.5 * e1 + 0.8 * e2), x + s * (-0.5 * e1 - 0.8 * e2)}});
        break;
      }
      case Feature::kArcS: {
        x = b + r_ * sector_direction(uniform(0.2, 0.8));
        const Vec3 g = (x - b).normalized();
        const Vec3 tangent = normal().cross(g);
        const double alpha = uniform(-1.0, 1.0);
        const Vec3 n = std::cos(alpha) * g + std::sin(alpha) * normal();
        const Vec3 e2 = n.cross(tangent).normalized();
        const double s = 0.3 * r_;
        tris_.push_back({{x + s * tangent, x + s * (-0.5 * tangent + 0.8 * e2), x + s * (-0.5 * tangent - 0.8 * e2)}});
        break;
      }
    }
    return {tri, x};
  }

  std::optional<probe::Support> resolve(const probe::Scene& scene, const probe::EventContext& ctx, Feature f,
                                        const Placed& p) const {
    using probe::Role;
    using probe::SupportKind;
    auto role = [&]() {
      switch (f) {
        case Feature::kAB:
        case Feature::kABPlane: return Role::kAB;
        case Feature::kBC: return Role::kBC;
        case Feature::kBT:
        case Feature::kBTV: return Role::kBT;
        case Feature::kSV: return Role::kSector;
        case Feature::kTan:
        case Feature::kTanS: return Role::kTangent;
        case Feature::kArc:
        case Feature::kArcS: return Role::kArc;
        default: return Role::kProbe;
      }
    }();
    const Triangle3& tri = scene.triangles()[p.triangle];
    switch (f) {
      case Feature::kSV:
      case Feature::kPV:
      case Feature::kBTV:
        for (int i = 0; i < static_cast<int>(scene.vertices().size()); ++i) {
          if ((scene.vertices()[i].p - tri.v[0]).norm() < 1e-12) return probe::Support{SupportKind::kVertex, role, i};
        }
        return std::nullopt;
      case Feature::kTanS:
      case Feature::kArcS:
        return probe::Support{SupportKind::kSurface, role, p.triangle};
      case Feature::kWE:
        for (int i = 0; i < static_cast<int>(scene.edges().size()); ++i) {
          if (probe::point_segment_distance(p.point, scene.edges()[i].seg) < 1e-12 &&
              probe::point_segment_distance(tri.v[0], scene.edges()[i].seg) < 1e-12 &&
              probe::point_segment_distance(tri.v[1], scene.edges()[i].seg) < 1e-12) {
            return probe::Support{SupportKind::kWholeEdge, role, i};
          }
        }
        return std::nullopt;
      default: {
        const Segment3 edge{tri.v[0], tri.v[1]};
        for (int i = 0; i < static_cast<int>(ctx.pieces.size()); ++i) {
          const Segment3& s = ctx.pieces[i].seg;
          const bool on_edge = probe::point_segment_distance(s.u, edge) < 1e-12 &&
                               probe::point_segment_distance(s.v, edge) < 1e-12;
          if (on_edge && probe::point_segment_distance(p.point, s) < 1e-12) return probe::Support{SupportKind::kEdge, role, i};
        }
        return std::nullopt;
      }
    }
  }

  std::mt19937_64 rng_;
  double r_ = 1.0;
  double big_r_ = 4.0;
  Trajectory truth_;
  std::vector<Triangle3> tris_;
};

/// True when some candidate matches the planted trajectory.
inline bool recovered(const std::vector<probe::CandidateSolution>& sols, const Trajectory& truth, double tol = 1e-7,
                      double* residual = nullptr) {
  for (const auto& c : sols) {
    if ((c.trajectory.b - truth.b).norm() <= tol && (c.trajectory.d - truth.d).norm() <= tol) {
      if (residual) *residual = c.residual;
      return true;
    }
  }
  return false;
}

}  // namespace planted
