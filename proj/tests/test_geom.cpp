#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "probe/geom.hpp"

using namespace probe;

namespace {

Vec3 uniform3(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng);
  const double y = u(rng);
  const double z = u(rng);
  return {x, y, z};
}

}  // namespace

TEST_CASE("segment stabs triangle interior") {
  const Triangle3 tri{{Vec3(1, -1, -1), Vec3(1, 1, -1), Vec3(1, 0, 1)}};
  const auto hit = seg_triangle_intersect({Vec3(0, 0, 0), Vec3(2, 0, 0)}, tri, 1e-8);
  CHECK(hit.kind == ContactKind::kInterior);
  CHECK((hit.point - Vec3(1, 0, 0)).norm() < 1e-12);
  CHECK_FALSE(seg_triangle_intersect({Vec3(0, 0, 5), Vec3(2, 0, 5)}, tri, 1e-8).hit());
}

TEST_CASE("segment touching a triangle edge is a boundary contact") {
  const Triangle3 tri{{Vec3(1, -1, -1), Vec3(1, 1, -1), Vec3(1, 0, 1)}};
  const auto c = seg_triangle_intersect({Vec3(0, 0, -1), Vec3(2, 0, -1)}, tri, 1e-8);
  CHECK(c.kind == ContactKind::kBoundary);
  CHECK_FALSE(seg_triangle_stabs({Vec3(0, 0, -1), Vec3(2, 0, -1)}, tri, 1e-8));
}

TEST_CASE("coplanar segment overlapping the triangle") {
  const Triangle3 tri{{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}};
  CHECK(seg_triangle_intersect({Vec3(-1, 0.5, 0), Vec3(3, 0.5, 0)}, tri, 1e-8).kind == ContactKind::kCoplanar);
}

TEST_CASE("seg_triangle_intersect matches the sampling oracle") {
  std::mt19937_64 rng(11);
  int checked = 0, hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Triangle3 tri{{uniform3(rng, -1, 1), uniform3(rng, -1, 1), uniform3(rng, -1, 1)}};
    if (tri.area() < 1e-3) continue;
    const Segment3 s{uniform3(rng, -1.5, 1.5), uniform3(rng, -1.5, 1.5)};
    const double m = oracle::segment_triangle_min_distance(s, tri);
    if (m > 1e-9 && m < 1e-6) continue;  // boundary band
    const bool truth = m <= 1e-9;
    const bool got = seg_triangle_intersect(s, tri, 1e-8).hit();
    CHECK(got == truth);
    ++checked;
    hits += truth;
  }
  CHECK(checked > 9000);
  CHECK(hits > 500);
}

TEST_CASE("triangle plane cross-section") {
  const Triangle3 tri{{Vec3(-1, -1, -1), Vec3(1, -1, -1), Vec3(0, -1, 1)}};
  const Plane3 z0{Vec3(0, 0, 1), 0.0};
  const auto cs = tri_plane_cross_section(tri, z0, 1e-8);
  REQUIRE(cs.kind == SectionKind::kSegment);
  const bool forward = (cs.a - Vec3(-0.5, -1, 0)).norm() < 1e-12 && (cs.b - Vec3(0.5, -1, 0)).norm() < 1e-12;
  const bool backward = (cs.b - Vec3(-0.5, -1, 0)).norm() < 1e-12 && (cs.a - Vec3(0.5, -1, 0)).norm() < 1e-12;
  CHECK((forward || backward));
  const Triangle3 above{{Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 1, 2)}};
  CHECK(tri_plane_cross_section(above, z0, 1e-8).kind == SectionKind::kEmpty);
  const Triangle3 flat{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}};
  CHECK(tri_plane_cross_section(flat, z0, 1e-8).kind == SectionKind::kCoplanar);
}

TEST_CASE("clip segment by circle") {
  const Circle2 unit{Vec2(0, 0), 1.0};
  auto pieces = clip_segment_by_circle({Vec2(-2, 0), Vec2(2, 0)}, unit, 1e-8);
  REQUIRE(pieces.size() == 3);
  CHECK_FALSE(pieces[0].inside);
  CHECK(pieces[1].inside);
  CHECK_FALSE(pieces[2].inside);
  CHECK((pieces[0].segment.v - Vec2(-1, 0)).norm() < 1e-12);
  CHECK((pieces[2].segment.u - Vec2(1, 0)).norm() < 1e-12);

  pieces = clip_segment_by_circle({Vec2(-0.2, 0.1), Vec2(0.3, -0.4)}, unit, 1e-8);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0].inside);

  pieces = clip_segment_by_circle({Vec2(-2, 1), Vec2(2, 1)}, unit, 1e-8);
  REQUIRE(pieces.size() == 1);
  CHECK_FALSE(pieces[0].inside);
}

TEST_CASE("clip pieces chain back to the input") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 1000; ++i) {
    const Segment2 s{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    const auto pieces = clip_segment_by_circle(s, {Vec2(0, 0), 1.0}, 1e-8);
    REQUIRE(!pieces.empty());
    CHECK(pieces.front().segment.u == s.u);
    CHECK(pieces.back().segment.v == s.v);
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      CHECK(pieces[k].segment.u == pieces[k - 1].segment.v);
      CHECK(pieces[k].inside != pieces[k - 1].inside);
    }
    for (const auto& p : pieces) {
      const Vec2 mid = p.segment.at(0.5);
      if (std::abs(mid.norm() - 1.0) > 1e-6) CHECK((mid.norm() < 1.0) == p.inside);
    }
  }
}

TEST_CASE("plane angles round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = uniform3(rng, -1, 1).normalized();
    const Plane3 p = Plane3::from_point_normal(Vec3::Zero(), n);
    const PlaneAngles a = p.angles();
    CHECK(a.inclination >= 0.0);
    CHECK(a.inclination < kPi);
    CHECK(a.node >= 0.0);
    CHECK(a.node < kPi);
    const Plane3 q = Plane3::from_angles(a);
    CHECK(std::abs(std::abs(q.normal.dot(n)) - 1.0) < 1e-9);
    const PlaneFrame f = PlaneFrame::from_angles(a);
    CHECK(std::abs(f.x_axis.dot(n)) < 1e-9);
    CHECK(std::abs(f.y_axis.dot(n)) < 1e-9);
  }
  const Plane3 base = Plane3::from_angles({0.0, 0.0});
  CHECK((base.normal - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("canonical normal is stable at the node boundary") {
  // Ω = 0 planes have n_x = 0 exactly; one-ulp noise must not flip them.
  for (double inc : {0.3, 1.0, kHalfPi, 2.5}) {
    const Vec3 n(0.0, -std::sin(inc), std::cos(inc));
    const Vec3 ref = Plane3::from_point_normal(Vec3::Zero(), n).canonical_normal();
    for (double eps : {1e-17, -1e-17, 1e-14, -1e-14}) {
      const Vec3 m = (n + Vec3(eps, 0, 0)).normalized();
      CHECK((Plane3::from_point_normal(Vec3::Zero(), m).canonical_normal() - ref).norm() < 1e-12);
      CHECK((Plane3::from_point_normal(Vec3::Zero(), -m).canonical_normal() - ref).norm() < 1e-12);
    }
  }
}
