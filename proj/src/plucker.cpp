#include "probe/plucker.hpp"

#include <algorithm>
#include <cmath>

namespace probe {

PluckerLine PluckerLine::from(const Line3& line) { return {line.dir, line.point.cross(line.dir)}; }

Line3 PluckerLine::to_line() const {
  const double n = dir.norm();
  const Vec3 d = dir / n;
  const Vec3 m = moment / n;
  return {d.cross(m), d};
}

namespace {

Line3 normalized(const Line3& l) {
  const Vec3 d = l.dir.normalized();
  const Vec3 p = l.point - l.point.dot(d) * d;
  return {p, d};
}

double line_line_distance(const Line3& a, const Line3& b) {
  const Vec3 c = a.dir.cross(b.dir);
  const double cn = c.norm();
  if (cn < 1e-12 * a.dir.norm() * b.dir.norm()) return point_line_distance(b.point, a);
  return std::abs((b.point - a.point).dot(c)) / cn;
}

double line_segment_distance(const Line3& line, const Line3& seg_line) {
  const Segment3 seg{seg_line.point, seg_line.point + seg_line.dir};
  const auto st = line_line_closest(line, seg_line);
  if (!st) {
    return std::min(point_line_distance(seg.u, line), point_line_distance(seg.v, line));
  }
  const double t = std::clamp(st->second, 0.0, 1.0);
  return point_line_distance(seg.at(t), line);
}

bool all_parallel(const std::array<Line3, 4>& lines) {
  for (int i = 1; i < 4; ++i) {
    if (lines[0].dir.cross(lines[i].dir).norm() > 1e-12) return false;
  }
  return true;
}

bool coplanar_parallel(const std::array<Line3, 4>& lines, double tol) {
  // All parallel to d; coplanar iff the offsets are collinear in the plane ⊥ d.
  const Vec3 d = lines[0].dir;
  Vec3 q[4];
  for (int i = 0; i < 4; ++i) q[i] = lines[i].point - lines[i].point.dot(d) * d;
  Vec3 axis = Vec3::Zero();
  for (int i = 1; i < 4; ++i) {
    if ((q[i] - q[0]).norm() > axis.norm()) axis = q[i] - q[0];
  }
  if (axis.norm() <= tol) return true;
  const Vec3 n = d.cross(axis).normalized();
  for (int i = 1; i < 4; ++i) {
    if (std::abs(n.dot(q[i] - q[0])) > tol) return false;
  }
  return true;
}

}  // namespace

std::vector<Transversal> line_transversals_of_lines(const std::array<Line3, 4>& raw, double tol) {
  std::array<Line3, 4> lines;
  std::array<PluckerLine, 4> pl;
  for (int i = 0; i < 4; ++i) {
    lines[i] = normalized(raw[i]);
    pl[i] = PluckerLine::from(lines[i]);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (lines[i].dir.cross(lines[j].dir).norm() < 1e-12 && line_line_distance(lines[i], lines[j]) <= tol) {
        throw DegenerateConfiguration("two inputs share a supporting line");
      }
    }
  }

  Eigen::Matrix<double, 4, 6> m;
  for (int i = 0; i < 4; ++i) {
    m.block<1, 3>(i, 0) = pl[i].moment.transpose();
    m.block<1, 3>(i, 3) = pl[i].dir.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 6>> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (sv(3) <= 1e-11 * smax) {
    if (all_parallel(lines)) {
      if (coplanar_parallel(lines, tol)) {
        throw DegenerateConfiguration("four coplanar parallel lines");
      }
      return {};
    }
    throw DegenerateConfiguration("side conditions are dependent");
  }
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  const Vec6 a = svd.matrixV().col(4);
  const Vec6 b = svd.matrixV().col(5);
  auto bilinear = [](const Vec6& x, const Vec6& y) {
    return 0.5 * (x.head<3>().dot(y.tail<3>()) + y.head<3>().dot(x.tail<3>()));
  };
  const double qa = bilinear(a, a);
  const double qb = 2.0 * bilinear(a, b);
  const double qc = bilinear(b, b);
  const double qscale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  if (qscale <= 1e-14) {
    throw DegenerateConfiguration("pencil lies on the Klein quadric");
  }

  // Roots of q(X) over X = u·a + b (or a + t·b), using the better conditioned form.
  std::vector<Vec6> candidates;
  const bool use_u = std::abs(qa) >= std::abs(qc);
  const double p2 = use_u ? qa : qc;
  const double p0 = use_u ? qc : qa;
  const double disc = qb * qb - 4.0 * p2 * p0;
  const double disc_tol = 1e-12 * qscale * qscale;
  auto make = [&](double root) -> Vec6 { return use_u ? Vec6(root * a + b) : Vec6(a + root * b); };
  if (disc < -disc_tol) return {};
  if (disc <= disc_tol) {
    candidates.push_back(make(-qb / (2.0 * p2)));
  } else {
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (qb + (qb >= 0 ? sq : -sq));
    candidates.push_back(make(qq / p2));
    if (std::abs(qq) > 0) candidates.push_back(make(p0 / qq));
  }

  std::vector<Transversal> out;
  for (const Vec6& x : candidates) {
    PluckerLine cand{x.head<3>(), x.tail<3>()};
    if (cand.dir.norm() < 1e-9 * x.norm()) continue;  // line at infinity
    const Line3 line = cand.to_line();
    const PluckerLine unit = PluckerLine::from(line);
    Transversal t;
    t.line = line;
    t.side_residual = 0.0;
    for (int i = 0; i < 4; ++i) {
      t.side_residual = std::max(t.side_residual, std::abs(unit.side(pl[i])));
      t.incidence[i] = line_line_distance(line, lines[i]);
    }
    bool duplicate = false;
    for (const auto& prev : out) {
      if (prev.line.dir.cross(line.dir).norm() <= 1e-9 && point_line_distance(line.point, prev.line) <= tol) {
        duplicate = true;
      }
    }
    if (!duplicate) out.push_back(t);
  }
  return out;
}

std::vector<Transversal> line_transversals_mixed(const std::array<Line3, 4>& lines,
                                                 const std::array<bool, 4>& bounded, double tol) {
  auto all = line_transversals_of_lines(lines, tol);
  std::vector<Transversal> out;
  for (auto& t : all) {
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (bounded[i]) t.incidence[i] = line_segment_distance(t.line, lines[i]);
      if (t.incidence[i] > tol) ok = false;
    }
    if (ok) out.push_back(t);
  }
  return out;
}

std::vector<Transversal> line_transversals_4(const std::array<Segment3, 4>& segments, double tol) {
  std::array<Line3, 4> lines;
  for (int i = 0; i < 4; ++i) lines[i] = Line3::of(segments[i]);
  return line_transversals_mixed(lines, {true, true, true, true}, tol);
}

}  // namespace probe
