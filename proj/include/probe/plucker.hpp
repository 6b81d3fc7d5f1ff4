#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "probe/geom.hpp"

namespace probe {

/// Four lines admit infinitely many common transversals.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line in Plücker coordinates (direction, moment = point × direction).
struct PluckerLine {
  Vec3 dir;
  Vec3 moment;

  static PluckerLine from(const Line3& line);
  /// Returns a line with unit direction; requires dir ≠ 0.
  Line3 to_line() const;
  /// Reciprocal product; zero iff the two lines are coplanar.
  double side(const PluckerLine& other) const { return dir.dot(other.moment) + other.dir.dot(moment); }
};

struct Transversal {
  Line3 line;               // unit direction
  double side_residual;     // max |side| against the four normalized inputs
  std::array<double, 4> incidence;  // distance from the line to each input
};

/// Lines meeting the four supporting lines. Returns at most two lines. A
/// double root is reported once. Throws DegenerateConfiguration when the
/// transversal set is infinite.
std::vector<Transversal> line_transversals_of_lines(const std::array<Line3, 4>& lines, double tol);

/// Transversals of four segments: lines meeting every segment within tol.
std::vector<Transversal> line_transversals_4(const std::array<Segment3, 4>& segments, double tol);

/// Transversal filter used by the event solvers, which mix segments and
/// unbounded lines: `bounded[i]` selects whether input i is a segment.
std::vector<Transversal> line_transversals_mixed(const std::array<Line3, 4>& lines,
                                                 const std::array<bool, 4>& bounded, double tol);

}  // namespace probe
