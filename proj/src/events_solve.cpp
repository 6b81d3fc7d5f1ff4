#include <algorithm>
#include <cmath>
#include <limits>

#include "probe/events.hpp"
#include "probe/plucker.hpp"

namespace probe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kSamples = 24;
constexpr int kRefineDepth = 5;
constexpr double kXTol = 1e-14;
constexpr double kInclusion = 1e-7;  // role membership (in sector, on segment)

struct Solver {
  const EventContext& ec;
  const ExtremalEvent& ev;
  double r;
  double tol;
  std::vector<CandidateSolution> out;

  const Support& s(int i) const { return ev.supports[i]; }
  const Segment3& seg(int i) const { return ec.pieces[s(i).id].seg; }
  Line3 line(int i) const { return Line3::of(seg(i)); }
  const Vec3& vert(int i) const { return ec.scene->vertices()[s(i).id].p; }
  const Triangle3& tri(int i) const { return ec.scene->triangles()[s(i).id]; }

  // Accepts (b, d) if every support touches its probe element.
  void emit(const Vec3& b, Vec3 d, std::optional<A1Unknowns> polish = std::nullopt);
  void emit_entries(const Line3& l);
};

// Sign-change scan that also zooms into local minima of |f|, where two
// close roots hide between samples of equal sign.
void scan_roots(const std::function<double(double)>& f, double lo, double hi, int n, int depth,
                std::vector<double>& out) {
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * i / n;
    fs[i] = f(xs[i]);
  }
  for (int i = 0; i < n; ++i) {
    const bool fin0 = std::isfinite(fs[i]), fin1 = std::isfinite(fs[i + 1]);
    if (fin0 != fin1 && depth > 0) {
      // Roots often sit right at the edge of the defined range: find the
      // edge and scan the defined part.
      double in = fin0 ? xs[i] : xs[i + 1], outx = fin0 ? xs[i + 1] : xs[i];
      for (int it = 0; it < 32; ++it) {
        const double mid = 0.5 * (in + outx);
        (std::isfinite(f(mid)) ? in : outx) = mid;
      }
      const double a = fin0 ? xs[i] : in, b = fin0 ? in : xs[i + 1];
      if (b > a) scan_roots(f, a, b, 8, 0, out);
      continue;
    }
    if (!fin0 || !fin1) continue;
    if (fs[i] == 0.0) out.push_back(xs[i]);
    if ((fs[i] < 0.0) != (fs[i + 1] < 0.0) && fs[i] != 0.0 && fs[i + 1] != 0.0) {
      for (double x : scalar_roots(f, xs[i], xs[i + 1], 1, kXTol)) out.push_back(x);
    }
  }
  if (fs[n] == 0.0) out.push_back(xs[n]);
  if (depth == 0) return;
  for (int i = 1; i < n; ++i) {
    const double a = fs[i - 1], m = fs[i], b = fs[i + 1];
    if (!std::isfinite(a) || !std::isfinite(m) || !std::isfinite(b)) continue;
    if ((a < 0.0) != (m < 0.0) || (m < 0.0) != (b < 0.0)) continue;
    if (std::abs(m) > std::abs(a) || std::abs(m) > std::abs(b)) continue;
    // Zoom only if the parabola through the three samples dips to zero.
    const double c2 = 0.5 * (a + b - 2.0 * m), c1 = 0.5 * (b - a);
    const double vertex = c2 != 0.0 ? m - c1 * c1 / (4.0 * c2) : m;
    if ((vertex < 0.0) != (m < 0.0) || std::abs(vertex) < 0.25 * std::abs(m)) {
      scan_roots(f, xs[i - 1], xs[i + 1], 8, depth - 1, out);
    }
  }
}

std::vector<double> roots01(const std::function<double(double)>& f) {
  std::vector<double> out;
  // A function vanishing on the whole range means the supports do not
  // isolate a trajectory (e.g. a vertex on another support's line).
  double peak = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = f(static_cast<double>(i) / kSamples);
    if (std::isfinite(v)) peak = std::max(peak, std::abs(v));
  }
  if (peak < 1e-13) return out;
  scan_roots(f, 0.0, 1.0, kSamples, kRefineDepth, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return y - x < 1e-12; }), out.end());
  return out;
}

// Elbow on C with bt passing through w.
std::optional<Vec3> radial(const Vec3& w, double r) {
  const double n = w.norm();
  if (!(n > 1e-12)) return std::nullopt;
  return Vec3(r * w / n);
}

Vec3 radial_or_nan(const Vec3& w, double r) {
  const auto b = radial(w, r);
  return b ? *b : Vec3::Constant(kNaN);
}

// Direction of the line through x meeting both lines (unnormalized).
Vec3 through_two(const Vec3& x, const Line3& l1, const Line3& l2) {
  const Vec3 n1 = (l1.point - x).cross(l1.dir);
  const Vec3 n2 = (l2.point - x).cross(l2.dir);
  return n1.cross(n2);
}

std::optional<Plane3> plane_through_origin(const Vec3& a, const Vec3& b) {
  const Vec3 n = a.cross(b);
  if (!(n.norm() > 1e-12 * a.norm() * b.norm()) || n.norm() < 1e-300) return std::nullopt;
  return Plane3{n.normalized(), 0.0};
}

std::optional<Vec3> segment_plane_crossing(const Segment3& s, const Plane3& p) {
  const double du = p.signed_distance(s.u);
  const double dv = p.signed_distance(s.v);
  if (du == dv) return std::nullopt;
  const double t = du / (du - dv);
  if (!(t >= -1e-12 && t <= 1.0 + 1e-12)) return std::nullopt;
  return s.at(std::clamp(t, 0.0, 1.0));
}

bool segment_in_plane(const Segment3& s, const Plane3& p, double tol) {
  return std::abs(p.signed_distance(s.u)) <= tol && std::abs(p.signed_distance(s.v)) <= tol;
}

// Point where the ray from the origin through the line of e2 meets e2 within
// the plane of (origin, e1).
std::optional<Vec3> radial_pair_point(const Segment3& e1, const Segment3& e2) {
  const auto p = plane_through_origin(e1.u, e1.v);
  if (!p) return std::nullopt;
  return segment_plane_crossing(e2, *p);
}

// Distance in the plane pl from b to the trace of the plane h.
double trace_distance(const Vec3& b, const Plane3& pl, const Plane3& h) {
  const Vec3 t = h.normal - h.normal.dot(pl.normal) * pl.normal;
  const double sin_angle = t.norm();
  if (sin_angle < 1e-12) return kNaN;
  return std::abs(h.signed_distance(b)) / sin_angle;
}

Plane3 triangle_plane(const Triangle3& t) { return Plane3::from_point_normal(t.v[0], t.unit_normal()); }

double max_abs(const VecX& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// A1 unknowns read off a geometric solution.
A1Unknowns a1_from_geometry(const Vec3& b, const Vec3& d, const Segment3& e1, const Segment3& e2,
                                  const Segment3& e3, double r) {
  A1Unknowns x;
  x.b = b;
  auto param = [](const Line3& a, const Line3& l) {
    const auto st = line_line_closest(a, l);
    return st ? st->first : 0.5;
  };
  const Line3 probe{b, d};
  x.lambda1 = param(Line3::of(e1), probe);
  x.lambda2 = param(Line3::of(e2), probe);
  x.lambda3 = param(Line3::of(e3), Line3{b, -b});
  x.p = e1.at(x.lambda1);
  x.q = e2.at(x.lambda2);
  const Vec3 w = e3.at(x.lambda3);
  x.lambda_bt = 1.0 - w.norm() / r;
  const double pq = (x.q - x.p).norm();
  x.lambda_pq = pq > 0 ? (b - x.p).norm() / pq : 0.5;
  return x;
}

void Solver::emit(const Vec3& b0, Vec3 d, std::optional<A1Unknowns> polish) {
  if (!b0.allFinite() || !d.allFinite() || d.norm() < 1e-14) return;
  d.normalize();
  Vec3 b = b0;
  if (polish) {
    const int e1 = 0, e2 = 1, e3 = 2;
    const Vec3& v = vert(3);
    auto sol = solve_a1_system(seg(e1), seg(e2), seg(e3), v, r, {*polish});
    if (!sol.empty()) {
      const A1Unknowns& x = sol.front();
      const Vec3 dd = x.q - x.p;
      if (dd.norm() > 1e-14) {
        b = x.b;
        d = dd.normalized();
      }
    }
  }
  if (d.dot(b) > 0.0) d = -d;
  const Trajectory t = make_trajectory(b, d);
  if (!(t.rho <= kHalfPi + 1e-9)) return;
  CandidateSolution c;
  c.trajectory = t;
  double worst = std::abs(b.norm() - r);
  for (int i = 0; i < ev.count; ++i) {
    const auto inc = support_incidence(ec, t, s(i));
    if (!inc || *inc > tol) return;
    c.incidence.push_back(*inc);
    worst = std::max(worst, *inc);
  }
  if (worst > tol) return;
  c.residual = worst;
  if (polish) {
    const A1Unknowns x = a1_from_geometry(t.b, t.d, seg(0), seg(1), seg(2), r);
    c.residual = std::max(c.residual, max_abs(a1_residual(x, seg(0), seg(1), seg(2), vert(3), r)));
  }
  // Same trajectory from two roots of one event: keep one.
  for (const auto& o : out) {
    if ((o.trajectory.b - t.b).norm() < 1e-9 && (o.trajectory.d - t.d).norm() < 1e-9) return;
  }
  out.push_back(std::move(c));
}

// Both travel orientations of a line; the elbow is where the probe enters C.
void Solver::emit_entries(const Line3& l) {
  const double n = l.dir.norm();
  if (!(n > 0)) return;
  for (double sgn : {1.0, -1.0}) {
    const Vec3 d = sgn * l.dir / n;
    const double pd = l.point.dot(d);
    const double disc = pd * pd - (l.point.squaredNorm() - r * r);
    if (disc < 0.0) continue;
    const double tau = -pd - std::sqrt(disc);
    emit(l.point + tau * d, d);
  }
}

// ---- recipes -------------------------------------------------------------

// b moves along the bt piece: b(λ) = r·ŵ(λ).
Vec3 elbow_on(const Segment3& bt, double lambda, double r) { return radial_or_nan(bt.at(lambda), r); }

void solve_straight_vertex(Solver& S) {
  S.emit(S.r * S.vert(0).normalized(), -S.vert(0));
}

void solve_straight_edges(Solver& S) {
  const auto& edges = S.ec.scene->edges();
  const Segment3& e1 = edges[S.s(0).id].seg;
  const Segment3& e2 = edges[S.s(1).id].seg;
  for (const auto& w : {radial_pair_point(e1, e2), radial_pair_point(e2, e1)}) {
    if (!w) continue;
    if (const auto b = radial(*w, S.r)) S.emit(*b, -*b);
  }
}

// A1: ab, bc, bt edges and a sector vertex.
void solve_a1(Solver& S) {
  const Line3 lab = S.line(0), lbc = S.line(1);
  const Segment3& bt = S.seg(2);
  const Vec3& v = S.vert(3);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return b.cross(through_two(b, lab, lbc)).dot(v);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    const Vec3 d = through_two(b, lab, lbc);
    Vec3 dd = d.dot(b) > 0 ? Vec3(-d) : d;
    if (dd.norm() < 1e-14) continue;
    dd.normalize();
    S.emit(b, dd, a1_from_geometry(b, dd, S.seg(0), S.seg(1), bt, S.r));
  }
}

// A2: ab edge, two bc edges, bt edge.
void solve_a2(Solver& S) {
  const Line3 lab = S.line(0), l1 = S.line(1), l2 = S.line(2);
  const Segment3& bt = S.seg(3);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return line_side(Line3{b, through_two(b, l1, l2)}, lab);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    S.emit(b, through_two(b, l1, l2));
  }
}

// A3: ab, bc, two bt edges.
void solve_a3(Solver& S) {
  const auto w = radial_pair_point(S.seg(2), S.seg(3));
  if (!w) return;
  const auto b = radial(*w, S.r);
  if (b) S.emit(*b, through_two(*b, S.line(0), S.line(1)));
}

// Line in plane pl through b and the crossing of the ab edge.
void emit_in_plane(Solver& S, const Vec3& b, const Plane3& pl, int ab) {
  const auto x = segment_plane_crossing(S.seg(ab), pl);
  if (x) S.emit(b, b - *x);
}

// A4: ab, bt, two sector vertices.
void solve_a4(Solver& S) {
  const auto pl = plane_through_origin(S.vert(2), S.vert(3));
  if (!pl) return;
  const auto w = segment_plane_crossing(S.seg(1), *pl);
  if (!w) return;
  if (const auto b = radial(*w, S.r)) emit_in_plane(S, *b, *pl, 0);
}

// A5: ab, two bt edges, sector vertex.
void solve_a5(Solver& S) {
  const auto w = radial_pair_point(S.seg(1), S.seg(2));
  if (!w) return;
  const auto b = radial(*w, S.r);
  if (!b) return;
  const auto pl = plane_through_origin(*b, S.vert(3));
  if (pl) emit_in_plane(S, *b, *pl, 0);
}

// A6: two ab edges, bt edge, sector vertex.
void solve_a6(Solver& S) {
  const Line3 l1 = S.line(0), l2 = S.line(1);
  const Segment3& bt = S.seg(2);
  const Vec3& v = S.vert(3);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return b.cross(through_two(b, l1, l2)).dot(v);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    S.emit(b, through_two(b, l1, l2));
  }
}

Line3 origin_line(const Vec3& v) { return {Vec3::Zero(), v}; }

void emit_transversals(Solver& S, const std::array<Line3, 4>& lines, const std::array<bool, 4>& bounded) {
  std::vector<Transversal> ts;
  try {
    ts = line_transversals_mixed(lines, bounded, S.tol);
  } catch (const DegenerateConfiguration&) {
    return;
  }
  for (const auto& t : ts) S.emit_entries(t.line);
}

// A7: two ab edges, bc edge, sector vertex.
void solve_a7(Solver& S) {
  emit_transversals(S, {S.line(0), S.line(1), S.line(2), origin_line(S.vert(3))}, {true, true, true, false});
}

// A8: two ab edges, bc edge, bt edge.
void solve_a8(Solver& S) {
  const Line3 l1 = S.line(0), l2 = S.line(1), lbc = S.line(2);
  const Segment3& bt = S.seg(3);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return line_side(Line3{b, through_two(b, l1, l2)}, lbc);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    S.emit(b, through_two(b, l1, l2));
  }
}

// A9, A12, A15: four edges on the straight probe.
void solve_four_edges(Solver& S) {
  emit_transversals(S, {S.line(0), S.line(1), S.line(2), S.line(3)}, {true, true, true, true});
}

// A10: two ab edges, two bt edges.
void solve_a10(Solver& S) {
  const auto w = radial_pair_point(S.seg(2), S.seg(3));
  if (!w) return;
  if (const auto b = radial(*w, S.r)) S.emit(*b, through_two(*b, S.line(0), S.line(1)));
}

// A11: two ab edges, two sector vertices.
void solve_a11(Solver& S) {
  const auto pl = plane_through_origin(S.vert(2), S.vert(3));
  if (!pl) return;
  const auto x1 = segment_plane_crossing(S.seg(0), *pl);
  const auto x2 = segment_plane_crossing(S.seg(1), *pl);
  if (x1 && x2 && (*x1 - *x2).norm() > 1e-12) S.emit_entries(Line3::through(*x1, *x2));
}

// A13: three ab edges, bt edge.
void solve_a13(Solver& S) {
  const Line3 l1 = S.line(0), l2 = S.line(1), l3 = S.line(2);
  const Segment3& bt = S.seg(3);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return line_side(Line3{b, through_two(b, l1, l2)}, l3);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    S.emit(b, through_two(b, l1, l2));
  }
}

// A14: three ab edges, sector vertex.
void solve_a14(Solver& S) {
  emit_transversals(S, {S.line(0), S.line(1), S.line(2), origin_line(S.vert(3))}, {true, true, true, false});
}

// Tangency locus: elbow on the bt piece at distance r from the tangent
// support, with the touch point f. Returns (b, f) pairs.
std::vector<std::pair<Vec3, Vec3>> tangent_elbows(Solver& S, int bt_index, int tan_index) {
  std::vector<std::pair<Vec3, Vec3>> out;
  const Segment3& bt = S.seg(bt_index);
  const Support& tan = S.s(tan_index);
  if (tan.kind == SupportKind::kSurface) {
    const Plane3 h = triangle_plane(S.tri(tan_index));
    for (double sgn : {1.0, -1.0}) {
      auto g = [&](double l) { return sgn * h.signed_distance(elbow_on(bt, l, S.r)) - S.r; };
      for (double l : roots01(g)) {
        const Vec3 b = elbow_on(bt, l, S.r);
        out.emplace_back(b, b - h.signed_distance(b) * h.normal);
      }
    }
    return out;
  }
  const Line3 le = S.line(tan_index);
  auto g = [&](double l) { return point_line_distance(elbow_on(bt, l, S.r), le) - S.r; };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    const Vec3 u = le.dir.normalized();
    out.emplace_back(b, le.point + (b - le.point).dot(u) * u);
  }
  return out;
}

std::optional<std::pair<Vec3, Vec3>> tangent_at(Solver& S, const Vec3& b, int tan_index) {
  if (S.s(tan_index).kind == SupportKind::kSurface) {
    const Plane3 h = triangle_plane(S.tri(tan_index));
    return std::make_pair(b, Vec3(b - h.signed_distance(b) * h.normal));
  }
  const Line3 le = S.line(tan_index);
  const Vec3 u = le.dir.normalized();
  return std::make_pair(b, Vec3(le.point + (b - le.point).dot(u) * u));
}

// A16: ab edge, bt edge, tangent support.
void solve_a16(Solver& S) {
  for (const auto& [b, f] : tangent_elbows(S, 1, 2)) {
    if (const auto pl = plane_through_origin(b, f)) emit_in_plane(S, b, *pl, 0);
  }
}

// A17: ab, bc, bt, tangent; the ab edge lies in the sector plane.
void solve_a17(Solver& S) {
  for (const auto& [b, f] : tangent_elbows(S, 2, 3)) {
    const auto pl = plane_through_origin(b, f);
    if (!pl || !segment_in_plane(S.seg(0), *pl, S.tol)) continue;
    if (const auto x = segment_plane_crossing(S.seg(1), *pl)) S.emit(b, *x - b);
  }
}

// A18: ab, bt, sector vertex, tangent.
void solve_a18(Solver& S) {
  for (const auto& [b, f] : tangent_elbows(S, 1, 3)) {
    if (const auto pl = plane_through_origin(b, f)) emit_in_plane(S, b, *pl, 0);
  }
}

// A19: ab, two bt edges, tangent.
void solve_a19(Solver& S) {
  const auto w = radial_pair_point(S.seg(1), S.seg(2));
  if (!w) return;
  const auto b = radial(*w, S.r);
  if (!b) return;
  const auto bf = tangent_at(S, *b, 3);
  if (!bf) return;
  if (const auto pl = plane_through_origin(*b, bf->second)) emit_in_plane(S, *b, *pl, 0);
}

// A21: two ab edges, bt, tangent; one ab edge lies in the sector plane.
void solve_a21(Solver& S) {
  for (const auto& [b, f] : tangent_elbows(S, 2, 3)) {
    const auto pl = plane_through_origin(b, f);
    if (!pl) continue;
    for (int k : {0, 1}) {
      if (segment_in_plane(S.seg(k), *pl, S.tol)) emit_in_plane(S, b, *pl, 1 - k);
    }
  }
}

// Arc residual: the support crosses the sector plane at distance r from b.
double arc_residual(Solver& S, const Vec3& b, const Vec3& d, int arc_index) {
  const auto pl = plane_through_origin(b, d);
  if (!pl) return kNaN;
  if (S.s(arc_index).kind == SupportKind::kSurface) {
    return trace_distance(b, *pl, triangle_plane(S.tri(arc_index))) - S.r;
  }
  // Supporting line rather than the segment: keeps g defined on a wide range;
  // the incidence check enforces the segment afterwards.
  const auto x = line_plane_intersection(S.line(arc_index), *pl);
  if (!x) return kNaN;
  return (*x - b).norm() - S.r;
}

// A20 / A22: the probe line sweeps the regulus of lines meeting the first ab
// edge and two further lines; the arc support pins the member.
void solve_regulus(Solver& S, const Line3& l2, const Line3& l3, int arc_index) {
  const Segment3& e1 = S.seg(0);
  for (double sgn : {1.0, -1.0}) {
    auto member = [&](double mu, Vec3& b, Vec3& d) {
      const Vec3 x = e1.at(mu);
      Vec3 dir = through_two(x, l2, l3);
      const double n = dir.norm();
      if (!(n > 1e-14)) return false;
      d = sgn * dir / n;
      const double pd = x.dot(d);
      const double disc = pd * pd - (x.squaredNorm() - S.r * S.r);
      if (disc < 0.0) return false;
      b = x + (-pd - std::sqrt(disc)) * d;
      return true;
    };
    auto g = [&](double mu) {
      Vec3 b, d;
      if (!member(mu, b, d)) return kNaN;
      return arc_residual(S, b, d, arc_index);
    };
    for (double mu : roots01(g)) {
      Vec3 b, d;
      if (member(mu, b, d)) S.emit(b, d);
    }
  }
}

void solve_a20(Solver& S) { solve_regulus(S, S.line(1), S.line(2), 3); }
void solve_a22(Solver& S) { solve_regulus(S, S.line(1), origin_line(S.vert(2)), 3); }

// AV1: probe through two vertices.
void solve_av1(Solver& S) {
  if ((S.vert(0) - S.vert(1)).norm() > 1e-12) S.emit_entries(Line3::through(S.vert(0), S.vert(1)));
}

// AV2: probe through a vertex meeting two edges.
void solve_av2(Solver& S) {
  const Vec3& v = S.vert(0);
  S.emit_entries(Line3{v, through_two(v, S.line(1), S.line(2))});
}

// AV3: bt through a vertex, probe meeting two edges.
void solve_av3(Solver& S) {
  if (const auto b = radial(S.vert(0), S.r)) S.emit(*b, through_two(*b, S.line(1), S.line(2)));
}

// AV4: bt through a vertex, probe through another.
void solve_av4(Solver& S) {
  if (const auto b = radial(S.vert(0), S.r)) S.emit(*b, *b - S.vert(1));
}

// AV5: bt through a vertex, sector vertex, probe edge.
void solve_av5(Solver& S) {
  const auto b = radial(S.vert(0), S.r);
  if (!b) return;
  const auto pl = plane_through_origin(*b, S.vert(1));
  if (pl) emit_in_plane(S, *b, *pl, 2);
}

// AV6: probe vertex, sector vertex, probe edge.
void solve_av6(Solver& S) {
  const auto pl = plane_through_origin(S.vert(0), S.vert(1));
  if (!pl) return;
  const auto x = segment_plane_crossing(S.seg(2), *pl);
  if (x && (*x - S.vert(0)).norm() > 1e-12) S.emit_entries(Line3::through(*x, S.vert(0)));
}

// AV7: bt edge, probe vertex, probe edge.
void solve_av7(Solver& S) {
  const Segment3& bt = S.seg(0);
  const Vec3& v = S.vert(1);
  const Line3 le = S.line(2);
  auto g = [&](double l) {
    const Vec3 b = elbow_on(bt, l, S.r);
    return line_side(Line3::through(b, v), le);
  };
  for (double l : roots01(g)) {
    const Vec3 b = elbow_on(bt, l, S.r);
    S.emit(b, b - v);
  }
}

// AV8: two bt edges, probe vertex.
void solve_av8(Solver& S) {
  const auto w = radial_pair_point(S.seg(0), S.seg(1));
  if (!w) return;
  if (const auto b = radial(*w, S.r)) S.emit(*b, *b - S.vert(2));
}

// AV9: probe vertex, bt edge, sector vertex.
void solve_av9(Solver& S) {
  const auto pl = plane_through_origin(S.vert(0), S.vert(2));
  if (!pl) return;
  const auto w = segment_plane_crossing(S.seg(1), *pl);
  if (!w) return;
  if (const auto b = radial(*w, S.r)) S.emit(*b, *b - S.vert(0));
}

// In-sector membership of a world point; false for a degenerate sector.
bool in_sector(const Trajectory& t, double r, const Vec3& x) {
  if (t.rho < 1e-9) return false;
  const CircularSector sec = CircularSector::of(t, r);
  return point_in_sector_2d(sec.local(), sec.frame.to_local(x), kInclusion);
}

}  // namespace

// ---- A1 system --------------------------------------------------------------

VecX A1Unknowns::pack() const {
  VecX x(17);
  x << lambda1, lambda2, lambda3, lambda_bt, lambda_pq, b, p, q, t;
  return x;
}

A1Unknowns A1Unknowns::unpack(const VecX& x) {
  A1Unknowns u;
  u.lambda1 = x[0];
  u.lambda2 = x[1];
  u.lambda3 = x[2];
  u.lambda_bt = x[3];
  u.lambda_pq = x[4];
  u.b = x.segment<3>(5);
  u.p = x.segment<3>(8);
  u.q = x.segment<3>(11);
  u.t = x.segment<3>(14);
  return u;
}

VecX a1_residual(const A1Unknowns& x, const Segment3& e1, const Segment3& e2, const Segment3& e3,
                    const Vec3& v, double r) {
  VecX f(17);
  f.segment<3>(0) = (1.0 - x.lambda_bt) * x.b + x.lambda_bt * x.t - e3.at(x.lambda3);
  f[3] = (x.b - x.t).squaredNorm() - r * r;
  f.segment<3>(4) = (1.0 - x.lambda_pq) * x.p + x.lambda_pq * x.q - x.b;
  f.segment<3>(7) = x.p - e1.at(x.lambda1);
  f.segment<3>(10) = x.q - e2.at(x.lambda2);
  f[13] = (x.b - x.t).cross(v - x.t).dot(x.p - x.t);
  f.segment<3>(14) = x.t;
  return f;
}

std::vector<A1Unknowns> solve_a1_system(const Segment3& e1, const Segment3& e2, const Segment3& e3,
                                              const Vec3& v, double r, const std::vector<A1Unknowns>& seeds) {
  double extent = 4.0 * r;
  for (const Segment3* s : {&e1, &e2, &e3}) extent = std::max({extent, s->u.norm(), s->v.norm()});
  extent = std::max(extent, v.norm());
  Box box{VecX::Constant(17, -2.0 * extent), VecX::Constant(17, 2.0 * extent)};
  box.lo.head<5>().setZero();
  box.hi.head<5>().setOnes();
  std::vector<VecX> packed;
  for (const auto& s : seeds) packed.push_back(s.pack());
  const auto residual = [&](const VecX& x) { return a1_residual(A1Unknowns::unpack(x), e1, e2, e3, v, r); };
  std::vector<A1Unknowns> out;
  for (const VecX& x : solve_square_system(residual, packed, box)) out.push_back(A1Unknowns::unpack(x));
  return out;
}

// ---- incidence ------------------------------------------------------------

std::optional<double> support_incidence(const EventContext& ctx, const Trajectory& t, const Support& s) {
  const Scene& scene = *ctx.scene;
  const double r = scene.r();
  const Vec3 a = t.entry(r, scene.big_r());
  const Vec3 c = t.c_int(r);
  auto element = [&]() -> std::optional<Segment3> {
    switch (s.role) {
      case Role::kAB:
        return Segment3{a, t.b};
      case Role::kBC:
        return Segment3{t.b, c};
      case Role::kProbe:
        return Segment3{a, c};
      case Role::kBT:
        return Segment3{t.b, Vec3::Zero()};
      default:
        return std::nullopt;
    }
  };
  if (const auto el = element()) {
    switch (s.kind) {
      case SupportKind::kEdge:
        return segment_segment_distance(ctx.pieces.at(s.id).seg, *el);
      case SupportKind::kWholeEdge:
        return segment_segment_distance(scene.edges().at(s.id).seg, *el);
      case SupportKind::kVertex:
        return point_segment_distance(scene.vertices().at(s.id).p, *el);
      case SupportKind::kSurface:
        return segment_triangle_distance(*el, scene.triangles().at(s.id));
    }
  }
  if (t.rho < 1e-9) return std::nullopt;
  const Plane3 pl{t.b.cross(t.d).normalized(), 0.0};
  switch (s.role) {
    case Role::kSector: {
      if (s.kind != SupportKind::kVertex) return std::nullopt;
      const Vec3& v = scene.vertices().at(s.id).p;
      const double dist = pl.signed_distance(v);
      if (!in_sector(t, r, v - dist * pl.normal)) return std::nullopt;
      return std::abs(dist);
    }
    case Role::kArc: {
      if (s.kind == SupportKind::kSurface) {
        const Triangle3& tri = scene.triangles().at(s.id);
        const Plane3 h = triangle_plane(tri);
        // Point on the trace nearest to b.
        const Vec3 m = h.normal - h.normal.dot(pl.normal) * pl.normal;
        if (m.norm() < 1e-12) return std::nullopt;
        const Vec3 foot = t.b - (h.signed_distance(t.b) / m.squaredNorm()) * m;
        if (point_triangle_distance(foot, tri) > kInclusion || !in_sector(t, r, foot)) return std::nullopt;
        return std::abs((foot - t.b).norm() - r);
      }
      if (s.kind != SupportKind::kEdge) return std::nullopt;
      const auto x = segment_plane_crossing(ctx.pieces.at(s.id).seg, pl);
      if (!x || !in_sector(t, r, *x)) return std::nullopt;
      return std::abs((*x - t.b).norm() - r);
    }
    case Role::kTangent: {
      if (s.kind == SupportKind::kSurface) {
        const Triangle3& tri = scene.triangles().at(s.id);
        const Plane3 h = triangle_plane(tri);
        const Vec3 f = t.b - h.signed_distance(t.b) * h.normal;
        if (point_triangle_distance(f, tri) > kInclusion || !in_sector(t, r, f)) return std::nullopt;
        return std::max(std::abs(std::abs(h.signed_distance(t.b)) - r), std::abs(pl.signed_distance(f)));
      }
      if (s.kind != SupportKind::kEdge) return std::nullopt;
      const Segment3& e = ctx.pieces.at(s.id).seg;
      double lam = 0.0;
      const Vec3 f = closest_point_on_segment(t.b, e, &lam);
      if (lam <= 0.0 || lam >= 1.0) return std::nullopt;  // tangency needs an interior foot
      if (!in_sector(t, r, f)) return std::nullopt;
      return std::max(std::abs((f - t.b).norm() - r), std::abs(pl.signed_distance(f)));
    }
    default:
      return std::nullopt;
  }
}

// ---- dispatch -------------------------------------------------------------

std::vector<CandidateSolution> solve_event(const EventContext& ctx, const ExtremalEvent& ev) {
  Solver S{ctx, ev, ctx.scene->r(), ctx.scene->tolerance().incidence, {}};
  switch (ev.id) {
    case CaseId::kU1: solve_straight_vertex(S); break;
    case CaseId::kU2: solve_straight_edges(S); break;
    case CaseId::kA1: solve_a1(S); break;
    case CaseId::kA2: solve_a2(S); break;
    case CaseId::kA3: solve_a3(S); break;
    case CaseId::kA4: solve_a4(S); break;
    case CaseId::kA5: solve_a5(S); break;
    case CaseId::kA6: solve_a6(S); break;
    case CaseId::kA7: solve_a7(S); break;
    case CaseId::kA8: solve_a8(S); break;
    case CaseId::kA9:
    case CaseId::kA12:
    case CaseId::kA15: solve_four_edges(S); break;
    case CaseId::kA10: solve_a10(S); break;
    case CaseId::kA11: solve_a11(S); break;
    case CaseId::kA13: solve_a13(S); break;
    case CaseId::kA14: solve_a14(S); break;
    case CaseId::kA16:
    case CaseId::kA16S: solve_a16(S); break;
    case CaseId::kA17:
    case CaseId::kA17S: solve_a17(S); break;
    case CaseId::kA18:
    case CaseId::kA18S: solve_a18(S); break;
    case CaseId::kA19:
    case CaseId::kA19S: solve_a19(S); break;
    case CaseId::kA20:
    case CaseId::kA20S: solve_a20(S); break;
    case CaseId::kA21:
    case CaseId::kA21S: solve_a21(S); break;
    case CaseId::kA22:
    case CaseId::kA22S: solve_a22(S); break;
    case CaseId::kAV1: solve_av1(S); break;
    case CaseId::kAV2: solve_av2(S); break;
    case CaseId::kAV3: solve_av3(S); break;
    case CaseId::kAV4: solve_av4(S); break;
    case CaseId::kAV5: solve_av5(S); break;
    case CaseId::kAV6: solve_av6(S); break;
    case CaseId::kAV7: solve_av7(S); break;
    case CaseId::kAV8: solve_av8(S); break;
    case CaseId::kAV9: solve_av9(S); break;
    case CaseId::kCount: throw UnsupportedCase("case id outside the catalog");
  }
  return std::move(S.out);
}

}  // namespace probe
