#include <doctest.h>

#include "probe/feasibility.hpp"
#include "probe/scene.hpp"

using namespace probe;

TEST_CASE("missing R defaults to 1.05 times the farthest vertex") {
  const std::string doc = R"({"r": 1, "target": [0,0,0], "triangles": [
    [[2,0,0],[1.9,0.5,0],[1.9,0,0.5]],
    [[-3,0,0],[-2.9,0.5,0],[-2.9,0,0.5]]]})";
  const Scene s = load_scene(doc);
  CHECK(s.big_r() == doctest::Approx(3.15).epsilon(1e-12));
}

TEST_CASE("validation errors name the invariant") {
  CHECK_THROWS_WITH_AS(load_scene(R"({"r": 5, "R": 2, "target": [0,0,0], "triangles": []})"), "r exceeds R",
                       ValidationError);
  CHECK_THROWS_WITH_AS(
      load_scene(R"({"r": 1, "target": [0,0,0], "triangles": [[[2,0,0],[3,0,0],[4,0,0]]]})"),
      doctest::Contains("degenerate triangle"), ValidationError);
  CHECK_THROWS_WITH_AS(
      load_scene(R"({"r": 1, "target": [0,0,0], "triangles": [[[-1,-1,0],[1,-1,0],[0,1,0]]]})"),
      doctest::Contains("target inside obstacle"), ValidationError);
  CHECK_THROWS_WITH_AS(load_scene(R"({"r": 1, "R": 2, "target": [0,0,0], "triangles": [[[5,0,0],[5,1,0],[5,0,1]]]})"),
                       doctest::Contains("enclosing sphere"), ValidationError);
  CHECK_THROWS_WITH_AS(load_scene(R"({"r": 1, "target": [0,0,0], "triangles": [
      [[2,-1,-1],[2,1,-1],[2,0,1]], [[1,0,0],[3,0,0.2],[3,0.3,-0.2]]]})"),
                       doctest::Contains("interpenetrate"), ValidationError);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(load_scene("{"), SchemaError);
  CHECK_THROWS_AS(load_scene(R"({"r": 1, "target": [0,0,0], "triangles": [], "extra": 1})"), SchemaError);
  CHECK_THROWS_AS(load_scene(R"({"r": "1", "target": [0,0,0], "triangles": []})"), SchemaError);
  CHECK_THROWS_AS(load_scene(R"({"r": 1, "target": [0,0], "triangles": []})"), SchemaError);
}

TEST_CASE("adjacent triangles sharing an edge are allowed and deduplicated") {
  const Scene s = load_scene(R"({"r": 1, "target": [0,0,0], "triangles": [
    [[2,0,0],[2,1,0],[2,0,1]], [[2,1,0],[2,0,1],[2,1,1]]]})");
  const SceneStats st = scene_stats(s);
  CHECK(st.edges == 6);
  CHECK(st.unique_edges == 5);
  CHECK(st.vertices == 4);
  CHECK(st.edges_inside + st.edges_crossing + st.edges_outside == st.edges);
}

TEST_CASE("target is translated to the origin and saving round-trips") {
  const std::string doc = R"({"r": 0.7, "R": 9.5, "target": [1.1, -2.3, 0.30000000000000004], "triangles": [
    [[3.1,0.1,0.2],[3.3,1.7,0.1],[2.9,0.2,1.9]]]})";
  const Scene s = load_scene(doc);
  CHECK((s.triangles()[0].v[0] - Vec3(2.0, 2.4, 0.2 - 0.30000000000000004)).norm() < 1e-12);
  const Scene back = load_scene(save_scene(s));
  CHECK(back.target() == s.target());
  CHECK(back.r() == s.r());
  CHECK(back.big_r() == s.big_r());
  for (int k = 0; k < 3; ++k) CHECK(back.raw_triangles()[0].v[k] == s.raw_triangles()[0].v[k]);
  CHECK(save_scene(back) == save_scene(s));
}

TEST_CASE("generated scenes are deterministic and valid") {
  CHECK(generate_scene(0, 1, Planted::kNone).scene.size() == 0);
  const auto a = generate_scene(12, 7, Planted::kArticulated);
  const auto b = generate_scene(12, 7, Planted::kArticulated);
  CHECK(save_scene(a.scene) == save_scene(b.scene));
  CHECK_NOTHROW(load_scene(save_scene(a.scene)));
  for (Planted p : {Planted::kNone, Planted::kUnarticulated, Planted::kArticulated}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = generate_scene(12, seed, p);
      CHECK(g.scene.size() == 12);
      CHECK_NOTHROW(validate_scene(g.scene));
      if (g.has_planted) {
        const Trajectory t = make_trajectory(g.planted_b, g.planted_d);
        CHECK(verify_trajectory(g.scene, t).feasible);
      }
    }
  }
}

TEST_CASE("icosphere shell") {
  const auto shell = icosphere_shell(0.5);
  CHECK(shell.size() == 80);
  const Scene s(1.0, 4.0, Vec3::Zero(), shell);
  CHECK_NOTHROW(validate_scene(s));
  const SceneStats st = scene_stats(s);
  CHECK(st.unique_edges == 120);
  CHECK(st.vertices == 42);
}
