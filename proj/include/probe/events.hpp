#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "probe/feasibility.hpp"
#include "probe/scene.hpp"
#include "probe/solver.hpp"

namespace probe {

class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalog of extremal configurations. U* are straight rays from t, A* the
/// articulated rows, A*S the rows with the arc supported by a triangle
/// surface instead of an edge, AV* the vertex-incidence variants.
enum class CaseId : std::uint8_t {
  kU1, kU2,
  kA1, kA2, kA3, kA4, kA5, kA6, kA7, kA8, kA9, kA10, kA11,
  kA12, kA13, kA14, kA15, kA16, kA17, kA18, kA19, kA20, kA21, kA22,
  kA16S, kA17S, kA18S, kA19S, kA20S, kA21S, kA22S,
  kAV1, kAV2, kAV3, kAV4, kAV5, kAV6, kAV7, kAV8, kAV9,
  kCount
};

const char* to_string(CaseId id);
CaseId parse_case(const std::string& s);  // throws UnsupportedCase
std::vector<CaseId> articulated_cases();

// kEdge ids index EdgePiece; kWholeEdge (straight rays only) indexes Scene::edges().
enum class SupportKind : std::uint8_t { kEdge, kWholeEdge, kVertex, kSurface };

/// Probe element touched by a support.
enum class Role : std::uint8_t {
  kAB,       // insertion segment outside C
  kBC,       // intermediate segment
  kProbe,    // anywhere on the insertion segment a -> c_int
  kBT,       // target radius
  kSector,   // vertex in the plane of the sector, inside it
  kArc,      // arc meets an edge crossing the sector plane / touches a surface
  kTangent,  // sphere D tangent to the edge (or surface), touch point on the arc
};

const char* to_string(SupportKind k);
const char* to_string(Role r);

struct Support {
  SupportKind kind = SupportKind::kEdge;
  Role role = Role::kAB;
  int id = -1;  // edge piece, vertex or triangle index (see EventContext)
};

struct ExtremalEvent {
  CaseId id = CaseId::kA1;
  std::uint8_t count = 0;
  std::array<Support, 4> supports{};
};

/// Edge piece after splitting scene edges at the sphere C.
struct EdgePiece {
  Segment3 seg;
  int edge;     // index into Scene::edges()
  bool inside;  // within C
};

/// Support pools shared by enumeration, solving and the count report.
struct EventContext {
  const Scene* scene = nullptr;
  std::vector<EdgePiece> pieces;
  std::vector<int> outside;   // pieces outside C
  std::vector<int> inside;    // pieces inside C
  std::vector<int> all;       // every piece
  std::vector<int> near;      // pieces within 2r of t
  std::vector<int> vertices;  // every vertex
  std::vector<int> v_inside;  // vertices within r
  std::vector<int> v_near;    // vertices within 2r
  std::vector<int> t_near;    // triangles within 2r
  std::vector<int> edges;     // unsplit edges (straight rays)

  static EventContext of(const Scene& scene);
};

/// Streams the events of one case in a fixed order.
void enumerate_case(const EventContext& ctx, CaseId id, const std::function<void(const ExtremalEvent&)>& out);
/// Rays from t through every vertex, then through every edge pair.
void enumerate_unarticulated(const EventContext& ctx, const std::function<void(const ExtremalEvent&)>& out);
void enumerate_articulated(const EventContext& ctx, const std::function<void(const ExtremalEvent&)>& out);

/// Number of events a case emits.
std::uint64_t count_case(const EventContext& ctx, CaseId id);

struct CandidateSolution {
  Trajectory trajectory;
  double residual = 0.0;
  std::vector<double> incidence;  // per support
};

/// Unknowns of the algebraic A1 system (target at the origin): edge
/// parameters, segment parameters for bt and pq, and the points b, p, q, t.
struct A1Unknowns {
  double lambda1 = 0, lambda2 = 0, lambda3 = 0;
  double lambda_bt = 0, lambda_pq = 0;
  Vec3 b = Vec3::Zero(), p = Vec3::Zero(), q = Vec3::Zero(), t = Vec3::Zero();

  VecX pack() const;
  static A1Unknowns unpack(const VecX& x);
};

/// Residual of the A1 system: ab meets e1 at p, bc meets e2 at q, bt
/// meets e3, the sector plane (t, b, v) contains p; 17 equations.
VecX a1_residual(const A1Unknowns& x, const Segment3& e1, const Segment3& e2, const Segment3& e3,
                    const Vec3& v, double r);

/// Multi-start Newton on the A1 system from the given seeds.
std::vector<A1Unknowns> solve_a1_system(const Segment3& e1, const Segment3& e2, const Segment3& e3,
                                              const Vec3& v, double r, const std::vector<A1Unknowns>& seeds);

/// Concrete trajectories realizing the event; each satisfies every support
/// within tol_incidence. Throws UnsupportedCase for an unknown case.
std::vector<CandidateSolution> solve_event(const EventContext& ctx, const ExtremalEvent& ev);

/// Incidence distance of a support for the given trajectory, or nullopt if
/// the support is not on the right part of the probe.
std::optional<double> support_incidence(const EventContext& ctx, const Trajectory& t, const Support& s);

struct CaseCounts {
  std::uint64_t enumerated = 0;
  std::uint64_t candidates = 0;  // solutions passing the support checks
  std::uint64_t touching = 0;    // feasible when contacts are allowed
  std::uint64_t feasible = 0;    // retracted into strictly free space
};

struct FoundTrajectory {
  std::uint64_t event_index = 0;  // position in enumeration order
  ExtremalEvent event;
  CandidateSolution extremal;     // the touching configuration
  Trajectory witness;             // passes verify_trajectory
};

struct PlanOptions {
  bool stop_at_first = true;
  int threads = 1;
  std::size_t batch = 4096;
};

struct PlanResult {
  bool feasible = false;
  std::optional<FoundTrajectory> best;  // smallest event index
  std::vector<FoundTrajectory> all;     // deduplicated, without stop_at_first
  std::map<CaseId, CaseCounts> counts;
};

PlanResult plan_exact(const Scene& scene, const PlanOptions& options = {});

nlohmann::json support_to_json(const EventContext& ctx, const Support& s);

}  // namespace probe
