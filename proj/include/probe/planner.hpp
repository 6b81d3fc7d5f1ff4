#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "probe/envelope2d.hpp"
#include "probe/feasibility.hpp"
#include "probe/scene.hpp"

namespace probe {

enum class PlaneStrategy { kGrid, kSphere };

PlaneStrategy parse_plane_strategy(const std::string& s);

struct PlaneSampleConfig {
  int count = 64;
  PlaneStrategy strategy = PlaneStrategy::kGrid;
  long per_plane_budget = 4000;  // 3D verifications per plane
  std::uint64_t seed = 0;        // rotates the sphere covering; grid ignores it
  int threads = 1;

  /// Throws std::invalid_argument when count < 1 or the budget is negative.
  void validate() const;
};

/// Planes through t. Grid: a sheared k x k lattice over (I, Ω) ∈ [0, π)²
/// whose first plane is I = Ω = 0; sphere: Fibonacci-spiral normals.
std::vector<Plane3> sample_planes(const PlaneSampleConfig& cfg);

struct PlaneHit {
  Trajectory trajectory;
  PlaneAngles plane;
  int plane_index = 0;
};

struct InPlaneStats {
  long verified = 0;  // 3D verifications spent
};

/// Searches the plane for a feasible trajectory using both rotation senses;
/// every returned trajectory passed verify_trajectory.
std::optional<Trajectory> plan_in_plane(const Scene& scene, const Plane3& plane, long budget = 4000,
                                        InPlaneStats* stats = nullptr);

struct SampledResult {
  std::optional<PlaneHit> hit;  // lowest plane index with a result
  int planes_tried = 0;
  long verified = 0;
};

SampledResult plan_sampled(const Scene& scene, const PlaneSampleConfig& cfg);
/// Same search over an explicit plane list.
SampledResult plan_sampled(const Scene& scene, const std::vector<Plane3>& planes, long per_plane_budget,
                           int threads = 1);

}  // namespace probe
