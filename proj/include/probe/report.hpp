#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "probe/events.hpp"
#include "probe/planner.hpp"

namespace probe {

/// Configuration echoed into a run report.
struct RunConfig {
  std::string scene;  // path as given
  std::string mode = "exact";
  bool stop_at_first = true;
  int threads = 1;
  int planes = 64;
  std::string strategy = "grid";
  long per_plane_budget = 4000;
  std::uint64_t seed = 0;
  Tolerance tol;
};

/// Trajectory document of the witness plus case, supports and residual of
/// the extremal configuration it was retracted from.
nlohmann::json result_to_json(const EventContext& ctx, const FoundTrajectory& f);
/// Trajectory document plus the generating plane.
nlohmann::json result_to_json(const PlaneHit& hit, const Vec3& target);

/// Run reports; wall_time < 0 leaves the timing field out (used to compare
/// reports across thread counts).
nlohmann::json exact_report(const Scene& scene, const PlanResult& res, const RunConfig& cfg, double wall_time);
nlohmann::json sampled_report(const Scene& scene, const SampledResult& res, const RunConfig& cfg, double wall_time);
nlohmann::json error_report(const std::string& message);

/// Pulls the trajectory out of a trajectory, result or report document.
Trajectory trajectory_from_any(const nlohmann::json& j, const Vec3& target);

}  // namespace probe
