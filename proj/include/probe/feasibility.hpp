#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "probe/geom.hpp"
#include "probe/scene.hpp"

namespace probe {

class InvalidTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rotation sense of bc within the plane, seen from the canonical plane normal:
/// ccw when the motion from d towards t is counter-clockwise.
enum class Sense { kCw, kCcw };

Sense parse_sense(const std::string& s);
const char* to_string(Sense s);
inline Sense opposite(Sense s) { return s == Sense::kCw ? Sense::kCcw : Sense::kCw; }

/// Probe trajectory with the target at the origin.
struct Trajectory {
  Vec3 b = Vec3::Zero();  // elbow position, |b| = r
  Vec3 d = Vec3::Zero();  // unit insertion direction (travel a -> b -> c)
  double rho = 0.0;       // rotation of bc, in [0, pi/2]
  Sense sense = Sense::kCcw;

  Vec3 c_int(double r) const { return b + r * d; }
  /// Entry point on the enclosing sphere of radius big_r.
  Vec3 entry(double r, double big_r) const;
  Segment3 insertion(double r, double big_r) const { return {entry(r, big_r), c_int(r)}; }
  /// Plane through t, b and c_int; for rho = 0 any plane containing b.
  Plane3 plane() const;
};

/// Builds a trajectory from an elbow position and insertion direction,
/// deriving rho and the sense. The direction is normalized.
Trajectory make_trajectory(const Vec3& b, const Vec3& d);

/// Throws InvalidTrajectory if T violates its invariants for probe radius r.
void check_trajectory(const Trajectory& t, double r, const Tolerance& tol);

/// Circular sector in plane coordinates: apex, unit directions of the two
/// bounding radii and the common radius. The angle between the radii is at
/// most pi/2.
struct Sector2 {
  Vec2 apex;
  Vec2 start;  // towards the intermediate tip c_int
  Vec2 end;    // towards the target
  double radius;

  /// Sector at elbow b with the target at t. For sense ccw the start radius
  /// is the target radius rotated clockwise by rho.
  static Sector2 at(const Vec2& b, const Vec2& t, double rho, Sense sense);
};

/// Closed-sector test inflated by tol (tol = 0 is the exact predicate).
bool sector_segment_intersect_2d(const Sector2& sector, const Segment2& s, double tol = 0.0);

/// True when the segment shortened by margin at both ends has a point at
/// depth > margin inside the sector.
bool sector_segment_overlap_2d(const Sector2& sector, const Segment2& s, double margin);

bool point_in_sector_2d(const Sector2& sector, const Vec2& p, double tol);

struct CircularSector {
  Vec3 apex;
  PlaneFrame frame;
  Vec3 start;  // unit
  Vec3 end;    // unit
  double radius;
  double angle;

  static CircularSector of(const Trajectory& t, double r);
  Sector2 local() const;
};

bool sector_triangle_intersect(const CircularSector& sector, const Triangle3& tri, double tol = 0.0);

enum class Stage { kInsertion, kSector };
const char* to_string(Stage s);

struct Verdict {
  bool feasible = true;
  Stage stage = Stage::kInsertion;
  int witness = -1;
  Vec3 contact = Vec3::Zero();
};

/// Conservative verification: contacts within tol_incidence are collisions.
Verdict verify_trajectory(const Scene& scene, const Trajectory& t);

/// Contact-permitting verification used for extremal candidates: only proper
/// penetrations deeper than margin count as collisions.
bool verify_touching(const Scene& scene, const Trajectory& t, double margin);

/// Looks for a conservatively feasible trajectory in a small neighbourhood
/// of t. Deterministic for fixed seed.
std::optional<Trajectory> retract(const Scene& scene, const Trajectory& t, std::uint64_t seed, int tries = 256);

/// Randomized sampler; returns the first verified-feasible draw.
std::optional<Trajectory> sample_feasible(const Scene& scene, long budget, std::uint64_t seed);

/// Trajectory with rho = 0 along the ray from t through u.
Trajectory unarticulated(const Vec3& u, double r);

/// Documents store the elbow in scene coordinates; in memory the target is
/// the origin.
nlohmann::json trajectory_to_json(const Trajectory& t, const Vec3& target = Vec3::Zero());
Trajectory trajectory_from_json(const nlohmann::json& j, const Vec3& target = Vec3::Zero());

}  // namespace probe
