#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "probe/geom.hpp"

namespace probe {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deduplicated obstacle edge (keyed by its sorted endpoint pair).
struct SceneEdge {
  Segment3 seg;
  int triangle;  // first owning triangle
  int local;     // edge index i: vertices (i, i+1 mod 3)
};

struct SceneVertex {
  Vec3 p;
  int triangle;
  int local;
};

/// Per-triangle data cached for the predicates.
struct TriangleCache {
  Vec3 unit_normal;
  Vec3 center;     // bounding sphere
  double radius;
};

/// Obstacle scene with the target translated to the origin.
///
/// Raw input coordinates are kept alongside so that saving reproduces the
/// document exactly.
class Scene {
 public:
  Scene() = default;
  Scene(double r, double big_r, const Vec3& target, std::vector<Triangle3> raw_triangles,
        const Tolerance& tol = {});

  double r() const { return r_; }
  double big_r() const { return big_r_; }
  const Vec3& target() const { return target_; }
  const std::vector<Triangle3>& triangles() const { return triangles_; }
  const std::vector<Triangle3>& raw_triangles() const { return raw_triangles_; }
  const std::vector<TriangleCache>& cache() const { return cache_; }
  const std::vector<SceneEdge>& edges() const { return edges_; }
  const std::vector<SceneVertex>& vertices() const { return vertices_; }
  const Tolerance& tolerance() const { return tol_; }
  std::size_t size() const { return triangles_.size(); }
  /// Scene diameter used to scale length/area tolerances.
  double diameter() const { return 2.0 * big_r_; }

 private:
  void build_caches();

  double r_ = 1.0;
  double big_r_ = 1.0;
  Vec3 target_ = Vec3::Zero();
  std::vector<Triangle3> raw_triangles_;
  std::vector<Triangle3> triangles_;
  std::vector<TriangleCache> cache_;
  std::vector<SceneEdge> edges_;
  std::vector<SceneVertex> vertices_;
  Tolerance tol_;
};

struct SceneStats {
  std::size_t triangles = 0;
  std::size_t edges = 0;      // 3n, before deduplication
  std::size_t unique_edges = 0;
  std::size_t vertices = 0;   // unique
  std::size_t edges_inside = 0;
  std::size_t edges_crossing = 0;
  std::size_t edges_outside = 0;
};

SceneStats scene_stats(const Scene& scene);

/// Checks every scene invariant; throws ValidationError naming the first
/// violation.
void validate_scene(const Scene& scene);

/// Parses and validates a scene JSON document.
Scene load_scene(const std::string& document, const Tolerance& tol = {});
Scene load_scene_file(const std::string& path, const Tolerance& tol = {});
std::string save_scene(const Scene& scene);
void save_scene_file(const Scene& scene, const std::string& path);

enum class Planted { kNone, kUnarticulated, kArticulated };

Planted parse_planted(const std::string& s);
const char* to_string(Planted p);

struct GeneratedScene {
  Scene scene;
  // For planted scenes: the trajectory kept clear by construction.
  bool has_planted = false;
  Vec3 planted_b = Vec3::Zero();
  Vec3 planted_d = Vec3::Zero();
  double planted_rho = 0.0;
};

/// Deterministic random scene with r = 1 and R = 4.
GeneratedScene generate_scene(int n, std::uint64_t seed, Planted planted);

/// Closed icosphere (80 faces) of the given radius about the origin.
std::vector<Triangle3> icosphere_shell(double radius);

/// True when the two triangles have interpenetrating interiors.
bool triangles_interpenetrate(const Triangle3& a, const Triangle3& b, double tol);

}  // namespace probe
