// Command-line front end: plan, verify, sector-empty-2d, gen, export.
//
// Exit status carries feasibility (0 feasible, 1 infeasible, 2 error);
// stdout is one JSON document, or one line per query for sector-empty-2d.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "probe/envelope2d.hpp"
#include "probe/events.hpp"
#include "probe/mesh_export.hpp"
#include "probe/planner.hpp"
#include "probe/report.hpp"

using namespace probe;
using nlohmann::json;

namespace {

constexpr int kFeasible = 0;
constexpr int kInfeasible = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("malformed " + what + ": " + e.what());
  }
}

int fail(const std::string& message) {
  std::cout << error_report(message).dump(2) << "\n";
  return kError;
}

struct PlanArgs {
  std::string scene;
  std::string mode = "exact";
  int planes = 64;
  std::string strategy = "grid";
  long budget = 4000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool all = false;
  Tolerance tol;
};

int cmd_plan(const PlanArgs& a) {
  a.tol.validate();
  const Scene scene = load_scene_file(a.scene, a.tol);
  RunConfig cfg;
  cfg.scene = a.scene;
  cfg.mode = a.mode;
  cfg.stop_at_first = !a.all;
  cfg.threads = a.threads;
  cfg.planes = a.planes;
  cfg.strategy = a.strategy;
  cfg.per_plane_budget = a.budget;
  cfg.seed = a.seed;
  cfg.tol = a.tol;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  json report;
  bool feasible = false;
  if (a.mode == "exact") {
    PlanOptions opts;
    opts.stop_at_first = !a.all;
    opts.threads = a.threads;
    const PlanResult res = plan_exact(scene, opts);
    feasible = res.feasible;
    report = exact_report(scene, res, cfg, elapsed());
  } else {
    PlaneSampleConfig pc;
    pc.count = a.planes;
    pc.strategy = parse_plane_strategy(a.strategy);
    pc.per_plane_budget = a.budget;
    pc.seed = a.seed;
    pc.threads = a.threads;
    const SampledResult res = plan_sampled(scene, pc);
    feasible = res.hit.has_value();
    report = sampled_report(scene, res, cfg, elapsed());
  }
  std::cout << report.dump(2) << "\n";
  return feasible ? kFeasible : kInfeasible;
}

int cmd_verify(const std::string& scene_path, const std::string& traj_path) {
  const Scene scene = load_scene_file(scene_path);
  const Trajectory t = trajectory_from_any(parse_json(read_file(traj_path), "trajectory"), scene.target());
  try {
    check_trajectory(t, scene.r(), scene.tolerance());
  } catch (const InvalidTrajectory& e) {
    throw SchemaError(e.what());
  }
  const Verdict v = verify_trajectory(scene, t);
  json out{{"outcome", v.feasible ? "feasible" : "infeasible"}};
  if (!v.feasible) {
    const Vec3 c = v.contact + scene.target();
    out["stage"] = to_string(v.stage);
    out["witness"] = v.witness;
    out["contact"] = {c.x(), c.y(), c.z()};
  }
  std::cout << out.dump(2) << "\n";
  return v.feasible ? kFeasible : kInfeasible;
}

int cmd_sector_empty(const std::string& instance_path, const std::string& queries_path) {
  const std::string doc = read_file(instance_path);
  const Envelope ccw = build_envelopes(load_planar_document(doc, Sense::kCcw));
  const Envelope cw = build_envelopes(load_planar_document(doc, Sense::kCw));
  std::istringstream lines(read_file(queries_path));
  std::string line;
  std::ostringstream out;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double x, y, rho;
    std::string sense_s, extra;
    if (!(ls >> x >> y >> rho >> sense_s) || (ls >> extra)) {
      throw SchemaError("query line " + std::to_string(line_no) + ": expected `x y rho sense`");
    }
    Sense sense;
    try {
      sense = parse_sense(sense_s);
    } catch (const std::invalid_argument& e) {
      throw SchemaError("query line " + std::to_string(line_no) + ": " + e.what());
    }
    const bool empty = query_sector_empty(sense == Sense::kCcw ? ccw : cw, Vec2(x, y), rho, sense);
    out << (empty ? "true" : "false") << "\n";
  }
  std::cout << out.str();
  return kFeasible;
}

int cmd_gen(int n, std::uint64_t seed, const std::string& planted, const std::string& out,
            const std::string& traj_out) {
  const GeneratedScene g = generate_scene(n, seed, parse_planted(planted));
  save_scene_file(g.scene, out);
  json report{{"outcome", "generated"}, {"scene", out}, {"triangles", g.scene.size()}};
  if (g.has_planted) {
    const Trajectory t = make_trajectory(g.planted_b, g.planted_d);
    const json tj = trajectory_to_json(t, g.scene.target());
    report["planted"] = tj;
    if (!traj_out.empty()) {
      std::ofstream f(traj_out);
      if (!f) throw SchemaError("cannot write " + traj_out);
      f << tj.dump(2) << "\n";
    }
  } else if (!traj_out.empty()) {
    throw SchemaError("--trajectory-out needs a planted scene");
  }
  std::cout << report.dump(2) << "\n";
  return kFeasible;
}

int cmd_export(const std::string& scene_path, const std::string& traj_path, const std::string& out_path,
               int wedges) {
  const Scene scene = load_scene_file(scene_path);
  const Trajectory t = trajectory_from_any(parse_json(read_file(traj_path), "trajectory"), scene.target());
  check_trajectory(t, scene.r(), scene.tolerance());
  MeshStats st;
  const std::string obj = mesh_obj(scene, t, wedges, &st);
  std::ofstream f(out_path);
  if (!f || !(f << obj)) throw SchemaError("cannot write " + out_path);
  std::cout << json{{"outcome", "exported"},
                    {"mesh", out_path},
                    {"vertices", st.vertices},
                    {"faces", st.faces},
                    {"sector_wedges", st.sector_wedges}}
                   .dump(2)
            << "\n";
  return kFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible trajectories for an articulated probe"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Plan a trajectory for a scene");
  p->add_option("scene", plan.scene, "Scene JSON")->required();
  p->add_option("--mode", plan.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  p->add_option("--planes", plan.planes, "Number of sampled planes")->check(CLI::PositiveNumber);
  p->add_option("--strategy", plan.strategy, "Plane sampling: grid or sphere")
      ->check(CLI::IsMember({"grid", "sphere"}));
  p->add_option("--per-plane-budget", plan.budget, "3D verifications per plane")->check(CLI::NonNegativeNumber);
  p->add_option("--seed", plan.seed, "Seed");
  p->add_option("--threads", plan.threads, "Worker threads")->check(CLI::PositiveNumber);
  p->add_flag("--all,!--stop-at-first", plan.all, "Solve every event instead of stopping at the first");
  p->add_option("--tol-len", plan.tol.len);
  p->add_option("--tol-area", plan.tol.area);
  p->add_option("--tol-unit", plan.tol.unit);
  p->add_option("--tol-residual", plan.tol.residual);
  p->add_option("--tol-incidence", plan.tol.incidence);

  std::string v_scene, v_traj;
  auto* v = app.add_subcommand("verify", "Check a trajectory against a scene");
  v->add_option("scene", v_scene)->required();
  v->add_option("trajectory", v_traj, "Trajectory, result or report JSON")->required();

  std::string q_inst, q_queries;
  auto* q = app.add_subcommand("sector-empty-2d", "Batch sector-emptiness queries on a 2D instance");
  q->add_option("instance", q_inst)->required();
  q->add_option("queries", q_queries, "One `x y rho sense` per line")->required();

  int g_n = 0;
  std::uint64_t g_seed = 0;
  std::string g_planted = "none", g_out, g_traj;
  auto* g = app.add_subcommand("gen", "Generate a random scene");
  g->add_option("n", g_n)->required()->check(CLI::NonNegativeNumber);
  g->add_option("seed", g_seed)->required();
  g->add_option("planted", g_planted, "none, unarticulated or articulated")->required();
  g->add_option("out", g_out)->required();
  g->add_option("--trajectory-out", g_traj, "Also write the planted trajectory");

  std::string e_scene, e_traj, e_out;
  int e_wedges = 64;
  auto* e = app.add_subcommand("export", "Write an OBJ mesh of the scene and a trajectory");
  e->add_option("scene", e_scene)->required();
  e->add_option("trajectory", e_traj)->required();
  e->add_option("out", e_out)->required();
  e->add_option("--wedges", e_wedges, "Sector fan wedges")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*p) return cmd_plan(plan);
    if (*v) return cmd_verify(v_scene, v_traj);
    if (*q) return cmd_sector_empty(q_inst, q_queries);
    if (*g) return cmd_gen(g_n, g_seed, g_planted, g_out, g_traj);
    if (*e) return cmd_export(e_scene, e_traj, e_out, e_wedges);
  } catch (const std::exception& err) {
    return fail(err.what());
  }
  return kError;
}
