#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "probe/feasibility.hpp"
#include "probe/geom.hpp"
#include "probe/scene.hpp"

namespace probe {

class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SenseMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clipped obstacle segment: wholly inside the bc circle (radius r) or wholly in the
/// annulus between the bc circle and the outer circle (radius √2 r).
struct PlanarPiece {
  Segment2 seg;  // canonical frame (see PlanarInstance)
  int source;    // index into PlanarInstance::segments
  bool inside;
};

/// Obstacle segments in the plane coordinates of the plane with the target at the
/// origin. Pieces are stored in a canonical frame in which bc sweeps
/// clockwise from bt; for the other sense the frame is mirrored (y -> -y).
struct PlanarInstance {
  double r = 1.0;
  Sense sense = Sense::kCcw;
  std::vector<Segment2> segments;
  std::vector<PlanarPiece> pieces;

  Vec2 to_canonical(const Vec2& p) const { return sense == Sense::kCcw ? p : Vec2(p.x(), -p.y()); }
};

PlanarInstance build_planar_instance(double r, const std::vector<Segment2>& segments, Sense sense);
PlanarInstance build_planar_instance(const Scene& scene, const Plane3& plane, Sense sense);

/// Cross-sections of the scene with the plane in plane coordinates (coplanar
/// triangles contribute their edges).
std::vector<Segment2> plane_sections(const Scene& scene, const Plane3& plane);

/// Which feature of the piece limits the rotation.
enum class Regime {
  kCircleNear,  // c' where the supporting line meets the bc disk (first crossing)
  kCircleFar,   // c' at the second crossing
  kPinnedU,     // bc' pinned at endpoint u
  kPinnedV,     // bc' pinned at endpoint v
};

/// Maximal θ-interval on which one feature of one piece limits rotation.
struct CurvePiece {
  int piece;
  int source;
  bool inside;  // piece inside the bc circle, else in the annulus
  Regime regime;
  double lo;  // θ domain, within [0, π] or [π, 2π]
  double hi;

  bool pinned() const { return regime == Regime::kPinnedU || regime == Regime::kPinnedV; }
};

struct Interval {
  double lo;
  double hi;
};

/// Limiting rotation angle of the piece at elbow angle θ; throws OutOfDomain
/// outside its domain.
double rho_s(const PlanarInstance& inst, const CurvePiece& c, double theta);
/// sin(rho_s / 2).
double f_s(const PlanarInstance& inst, const CurvePiece& c, double theta);

/// Direct evaluation of the limiting rotation of a piece at θ (no curve
/// structure): nullopt when the quart-sector misses the piece, 0 when bt
/// meets it.
std::optional<double> limiting_rotation(const Segment2& piece, double r, double theta);

/// Curve pieces of one clipped piece, plus the θ-intervals where bt meets it.
void piece_curves(const PlanarInstance& inst, int piece, std::vector<CurvePiece>& curves,
                  std::vector<Interval>& forbidden);

struct CurveCrossing {
  double theta;
  double x_b;
  bool closed_form;  // both pieces pinned: line(p, q) meets the bc circle
  bool first_lower_before;  // curve i is below curve j just before theta
};

/// Crossing of two curves over their shared domain (pseudo-segments cross at
/// most once).
std::optional<CurveCrossing> curve_intersection(const PlanarInstance& inst, const CurvePiece& ci,
                                                const CurvePiece& cj);

/// Envelope arc: the curve inducing the minimum over [lo, hi].
struct EnvelopeArc {
  double lo;
  double hi;
  int curve;
};

/// Envelope span in x_b for the hemisphere views V1 (y_b >= 0) and V2.
struct EnvelopeSpan {
  double x_lo;
  double x_hi;
  int source;
};

struct Envelope {
  std::shared_ptr<const PlanarInstance> instance;
  std::vector<CurvePiece> curves;
  std::vector<EnvelopeArc> arcs;     // sorted, disjoint, in [0, 2π)
  std::vector<Interval> forbidden;   // sorted, merged
  std::size_t merge_crossings = 0;

  Sense sense() const { return instance->sense; }
  std::vector<EnvelopeSpan> upper() const;  // V1
  std::vector<EnvelopeSpan> lower() const;  // V2
  /// Envelope value sin(rho/2) at θ in the canonical frame; nullopt if no
  /// curve is defined there.
  std::optional<double> value(double theta) const;
  bool is_forbidden(double theta) const;
};

Envelope build_envelopes(const PlanarInstance& inst);

/// Elbow angle in the canonical frame for a point b given in plane
/// coordinates.
double canonical_theta(const PlanarInstance& inst, const Vec2& b);

/// True iff the sector at b (plane coordinates) with angle rho and the given
/// sense misses every segment. Tangency counts as non-empty.
bool query_sector_empty(const Envelope& env, const Vec2& b, double rho, Sense sense);

/// Reference answer by testing every segment.
bool brute_force_sector_empty(const PlanarInstance& inst, const Vec2& b, double rho, Sense sense);

/// 2D instance document {"r": number, "segments": [[[x,y],[x,y]], ...]}.
PlanarInstance load_planar_document(const std::string& document, Sense sense);

}  // namespace probe
