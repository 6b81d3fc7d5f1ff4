#include <doctest.h>

#include <set>

#include "probe/events.hpp"
#include "probe/planner.hpp"

using namespace probe;

namespace {

// Vertical wall over the planar segment p-q (z = 0 plane), two triangles.
void wall(std::vector<Triangle3>& tris, const Vec2& p, const Vec2& q, double h = 1.0) {
  const Vec3 a(p.x(), p.y(), -h), b(q.x(), q.y(), -h), c(q.x(), q.y(), h), d(p.x(), p.y(), h);
  tris.push_back({{a, b, c}});
  tris.push_back({{a, c, d}});
}

Vec2 polar(double radius, double deg) {
  const double a = deg * kPi / 180.0;
  return {radius * std::cos(a), radius * std::sin(a)};
}

// In z = 0: a ring of walls at radius 1.5 with one gap between 35 and 48
// degrees, and an inner wall at radius 0.7 spanning 20 to 100 degrees. A
// probe has to come in through the gap and turn hard around the inner wall.
Scene quarter_turn_scene() {
  std::vector<Triangle3> tris;
  const double gap_hi = 48.0, gap_lo = 35.0 + 360.0;
  const int steps = 24;
  for (int k = 0; k < steps; ++k) {
    const double a0 = gap_hi + (gap_lo - gap_hi) * k / steps;
    const double a1 = gap_hi + (gap_lo - gap_hi) * (k + 1) / steps;
    wall(tris, polar(1.5, a0), polar(1.5, a1));
  }
  wall(tris, polar(0.7, 20.0), polar(0.7, 100.0));
  return Scene(1.0, 4.0, Vec3::Zero(), tris);
}

const Plane3 kBase = Plane3::from_angles({0.0, 0.0});

// Out-of-plane component of b - t and d.
double off_plane(const Trajectory& t, const Vec3& n) { return std::max(std::abs(t.b.dot(n)), std::abs(t.d.dot(n))); }

}  // namespace

TEST_CASE("plane sampling") {
  PlaneSampleConfig cfg;
  cfg.count = 1;
  const auto one = sample_planes(cfg);
  REQUIRE(one.size() == 1);
  CHECK(one[0].angles().inclination == doctest::Approx(0.0));
  CHECK(one[0].angles().node == doctest::Approx(0.0));

  for (int k = 1; k <= 12; ++k) {
    cfg.count = k * k;
    const auto planes = sample_planes(cfg);
    REQUIRE(planes.size() == static_cast<std::size_t>(k * k));
    std::set<std::pair<long long, long long>> distinct;
    for (const auto& p : planes) {
      const PlaneAngles a = p.angles();
      CHECK(a.inclination >= 0.0);
      CHECK(a.inclination < kPi);
      CHECK(std::abs(p.offset) == 0.0);
      distinct.insert({std::llround(a.inclination * 1e9), std::llround(a.node * 1e9)});
    }
    CHECK(distinct.size() == planes.size());
    const auto again = sample_planes(cfg);
    for (std::size_t i = 0; i < planes.size(); ++i) CHECK(again[i].normal == planes[i].normal);
  }

  cfg.strategy = PlaneStrategy::kSphere;
  cfg.count = 50;
  const auto sphere = sample_planes(cfg);
  for (std::size_t i = 0; i < sphere.size(); ++i) {
    CHECK(sphere[i].normal.norm() == doctest::Approx(1.0));
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(sphere[i].normal.dot(sphere[j].normal)) < 1 - 1e-9);
  }

  cfg.count = 0;
  CHECK_THROWS_AS(sample_planes(cfg), std::invalid_argument);
  CHECK_THROWS_AS(parse_plane_strategy("spiral"), std::invalid_argument);
}

TEST_CASE("empty scene plans a straight ray on the first plane") {
  const Scene empty(1.0, 4.0, Vec3::Zero(), {});
  const auto t = plan_in_plane(empty, kBase);
  REQUIRE(t.has_value());
  CHECK(t->rho == 0.0);
  PlaneSampleConfig cfg;
  const SampledResult res = plan_sampled(empty, cfg);
  REQUIRE(res.hit.has_value());
  CHECK(res.hit->plane_index == 0);
  CHECK(res.planes_tried == 1);
}

TEST_CASE("sealed target has no plane solution") {
  const Scene sealed(1.0, 4.0, Vec3::Zero(), icosphere_shell(0.5));
  PlaneSampleConfig cfg;
  cfg.count = 16;
  const SampledResult res = plan_sampled(sealed, cfg);
  CHECK_FALSE(res.hit.has_value());
  CHECK(res.planes_tried == 16);
}

TEST_CASE("quarter turn through a shaded gap") {
  const Scene scene = quarter_turn_scene();
  // Every straight ray in the plane is blocked.
  for (int k = 0; k < 3600; ++k) {
    const double a = 2 * kPi * k / 3600;
    const Trajectory ray = unarticulated(Vec3(std::cos(a), std::sin(a), 0), 1.0);
    REQUIRE_FALSE(verify_trajectory(scene, ray).feasible);
  }
  const auto t = plan_in_plane(scene, kBase, 20000);
  REQUIRE(t.has_value());
  CHECK(verify_trajectory(scene, *t).feasible);
  CHECK(t->rho > 0.3);
  CHECK(off_plane(*t, kBase.normal) <= 1e-8);
}

TEST_CASE("returned trajectories lie in their plane and verify") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto g = generate_scene(8, seed, Planted::kNone);
    PlaneSampleConfig cfg;
    cfg.count = 25;
    const auto planes = sample_planes(cfg);
    for (const auto& p : planes) {
      const auto t = plan_in_plane(g.scene, p, 2000);
      if (!t) continue;
      CHECK(verify_trajectory(g.scene, *t).feasible);
      CHECK(off_plane(*t, p.normal) <= 1e-8);
    }
  }
}

TEST_CASE("planted articulated scenes are found with 200 planes") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto g = generate_scene(12, seed, Planted::kArticulated);
    PlaneSampleConfig cfg;
    cfg.count = 200;
    cfg.seed = seed;
    const SampledResult res = plan_sampled(g.scene, cfg);
    REQUIRE(res.hit.has_value());
    CHECK(verify_trajectory(g.scene, res.hit->trajectory).feasible);
  }
}

TEST_CASE("a plane holding an exact witness is solved") {
  const Scene scene = generate_scene(6, 5, Planted::kArticulated).scene;
  PlanOptions opts;
  opts.stop_at_first = false;
  const PlanResult exact = plan_exact(scene, opts);
  REQUIRE(exact.feasible);
  int tried = 0;
  for (const auto& f : exact.all) {
    const Trajectory& w = f.witness;
    if (w.rho < 1e-3 || tried >= 5) continue;
    ++tried;
    const Plane3 plane = Plane3::from_point_normal(Vec3::Zero(), w.b.cross(w.d));
    const SampledResult res = plan_sampled(scene, {plane}, 20000);
    CHECK(res.hit.has_value());
  }
  CHECK(tried > 0);
}

TEST_CASE("sampled result does not depend on threads") {
  const auto g = generate_scene(10, 11, Planted::kArticulated);
  PlaneSampleConfig cfg;
  cfg.count = 36;
  cfg.threads = 1;
  const SampledResult one = plan_sampled(g.scene, cfg);
  cfg.threads = 3;
  const SampledResult three = plan_sampled(g.scene, cfg);
  REQUIRE(one.hit.has_value() == three.hit.has_value());
  if (one.hit) {
    CHECK(one.hit->plane_index == three.hit->plane_index);
    CHECK(one.hit->trajectory.b == three.hit->trajectory.b);
    CHECK(one.hit->trajectory.d == three.hit->trajectory.d);
  }
}
