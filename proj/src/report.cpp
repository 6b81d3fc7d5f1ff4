#include "probe/report.hpp"

namespace probe {

using nlohmann::json;

namespace {

json config_json(const RunConfig& cfg) {
  json j{{"scene", cfg.scene}, {"mode", cfg.mode}, {"threads", cfg.threads}, {"seed", cfg.seed}};
  if (cfg.mode == "exact") {
    j["stop_at_first"] = cfg.stop_at_first;
  } else {
    j["planes"] = cfg.planes;
    j["strategy"] = cfg.strategy;
    j["per_plane_budget"] = cfg.per_plane_budget;
  }
  j["tolerance"] = {{"len", cfg.tol.len},
                    {"area", cfg.tol.area},
                    {"unit", cfg.tol.unit},
                    {"residual", cfg.tol.residual},
                    {"incidence", cfg.tol.incidence}};
  return j;
}

}  // namespace

json result_to_json(const EventContext& ctx, const FoundTrajectory& f) {
  const Vec3& target = ctx.scene->target();
  json j = trajectory_to_json(f.witness, target);
  j["case"] = to_string(f.event.id);
  json supports = json::array();
  for (int k = 0; k < f.event.count; ++k) supports.push_back(support_to_json(ctx, f.event.supports[k]));
  j["supports"] = supports;
  j["residual"] = f.extremal.residual;
  j["extremal"] = trajectory_to_json(f.extremal.trajectory, target);
  j["event_index"] = f.event_index;
  return j;
}

json result_to_json(const PlaneHit& hit, const Vec3& target) {
  json j = trajectory_to_json(hit.trajectory, target);
  j["plane"] = {{"I", hit.plane.inclination}, {"Omega", hit.plane.node}};
  j["plane_index"] = hit.plane_index;
  return j;
}

json exact_report(const Scene& scene, const PlanResult& res, const RunConfig& cfg, double wall_time) {
  const EventContext ctx = EventContext::of(scene);
  json j;
  j["outcome"] = res.feasible ? "feasible" : "infeasible";
  if (res.best) j["result"] = result_to_json(ctx, *res.best);
  if (!cfg.stop_at_first) {
    json all = json::array();
    for (const auto& f : res.all) all.push_back(result_to_json(ctx, f));
    j["all"] = all;
  }
  CaseCounts total;
  json per_case = json::object();
  for (const auto& [id, c] : res.counts) {
    total.enumerated += c.enumerated;
    total.candidates += c.candidates;
    total.touching += c.touching;
    total.feasible += c.feasible;
    per_case[to_string(id)] = {{"enumerated", c.enumerated},
                               {"candidates", c.candidates},
                               {"touching", c.touching},
                               {"feasible", c.feasible}};
  }
  json counters{{"events_enumerated", total.enumerated},
                {"candidates_solved", total.candidates},
                {"candidates_verified", total.touching},
                {"feasible", total.feasible},
                {"per_case", per_case}};
  if (wall_time >= 0) counters["wall_time_s"] = wall_time;
  j["counters"] = counters;
  j["config"] = config_json(cfg);
  return j;
}

json sampled_report(const Scene& scene, const SampledResult& res, const RunConfig& cfg, double wall_time) {
  json j;
  j["outcome"] = res.hit ? "feasible" : "infeasible";
  if (res.hit) j["result"] = result_to_json(*res.hit, scene.target());
  json counters{{"planes_tried", res.planes_tried}, {"candidates_verified", res.verified}};
  if (wall_time >= 0) counters["wall_time_s"] = wall_time;
  j["counters"] = counters;
  j["config"] = config_json(cfg);
  return j;
}

json error_report(const std::string& message) { return json{{"outcome", "error"}, {"message", message}}; }

Trajectory trajectory_from_any(const json& j, const Vec3& target) {
  if (!j.is_object()) throw SchemaError("trajectory must be a JSON object");
  if (j.contains("outcome")) {
    if (!j.contains("result")) throw SchemaError("report has no result");
    return trajectory_from_any(j["result"], target);
  }
  if (j.contains("case") || j.contains("plane")) {
    json t;
    for (const char* k : {"b", "d", "rho", "sense"}) {
      if (j.contains(k)) t[k] = j[k];
    }
    return trajectory_from_json(t, target);
  }
  return trajectory_from_json(j, target);
}

}  // namespace probe
