#include "probe/envelope2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "probe/solver.hpp"

namespace probe {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAngleEps = 1e-13;

double wrap(double th) {
  th = std::fmod(th, kTwoPi);
  if (th < 0.0) th += kTwoPi;
  if (th >= kTwoPi) th -= kTwoPi;
  return th;
}

Vec2 elbow(double r, double th) { return {r * std::cos(th), r * std::sin(th)}; }

// Clockwise angle from bt to w.
double cw_angle(const Vec2& bt, const Vec2& w) { return std::atan2(cross2(w, bt), w.dot(bt)); }

// Solutions of n · (cos θ, sin θ) = c.
void solve_trig(const Vec2& n, double c, std::vector<double>& out, double shift = 0.0) {
  const double len = n.norm();
  if (len < 1e-300 || std::abs(c) > len) return;
  const double phi = std::atan2(n.y(), n.x());
  const double delta = std::acos(std::clamp(c / len, -1.0, 1.0));
  out.push_back(wrap(phi + delta + shift));
  out.push_back(wrap(phi - delta + shift));
}

struct Contact {
  enum Kind { kNone, kZero, kAt } kind = kNone;
  Regime regime = Regime::kPinnedU;
  double alpha = 0.0;
};

Contact evaluate(const Segment2& s, double r, double th) {
  Contact out;
  const Vec2 b = elbow(r, th);
  const Vec2 bt = -b / r;
  const Vec2 e = s.v - s.u;
  const Vec2 q = s.u - b;
  const double a = e.squaredNorm();
  Vec2 p0, p1;
  Regime tag0, tag1;
  if (a < 1e-300) {
    if (q.norm() > r) return out;
    p0 = p1 = s.u;
    tag0 = tag1 = Regime::kPinnedU;
  } else {
    const double bq = q.dot(e);
    const double c = q.squaredNorm() - r * r;
    const double disc = bq * bq - a * c;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double t0 = (-bq - sq) / a;
    const double t1 = (-bq + sq) / a;
    const double lo = std::max(0.0, t0);
    const double hi = std::min(1.0, t1);
    if (lo > hi) return out;
    p0 = lo == 0.0 ? s.u : s.at(lo);
    p1 = hi == 1.0 ? s.v : s.at(hi);
    tag0 = lo == 0.0 ? Regime::kPinnedU : Regime::kCircleNear;
    tag1 = hi == 1.0 ? Regime::kPinnedV : Regime::kCircleFar;
  }
  const Vec2 w0 = p0 - b;
  const Vec2 w1 = p1 - b;
  const double eps = 1e-14 * r;
  if (w0.norm() <= eps || w1.norm() <= eps) {
    out.kind = Contact::kZero;
    return out;
  }
  if (std::abs(cross2(w0, w1)) <= eps * std::max(w0.norm(), w1.norm()) && w0.dot(w1) < 0.0) {
    out.kind = Contact::kZero;  // b lies on the piece
    return out;
  }
  const double a0 = cw_angle(bt, w0);
  const double a1 = cw_angle(bt, w1);
  const bool first_low = a0 <= a1;
  const double lo = first_low ? a0 : a1;
  const double hi = first_low ? a1 : a0;
  if (hi - lo <= kPi) {
    if (lo <= 0.0 && hi >= 0.0) {
      out.kind = Contact::kZero;
    } else if (lo > 0.0 && lo <= kHalfPi) {
      out.kind = Contact::kAt;
      out.alpha = lo;
      out.regime = first_low ? tag0 : tag1;
    }
  } else if (hi <= kHalfPi) {
    out.kind = Contact::kAt;
    out.alpha = hi;
    out.regime = first_low ? tag1 : tag0;
  }
  return out;
}

// Limiting angle for a fixed regime, extended continuously to the domain
// boundary.
double regime_alpha(const Segment2& s, double r, double th, Regime regime) {
  const Vec2 b = elbow(r, th);
  const Vec2 bt = -b / r;
  Vec2 p;
  switch (regime) {
    case Regime::kPinnedU:
      p = s.u;
      break;
    case Regime::kPinnedV:
      p = s.v;
      break;
    default: {
      const Vec2 e = s.v - s.u;
      const Vec2 q = s.u - b;
      const double a = e.squaredNorm();
      const double bq = q.dot(e);
      const double disc = std::max(0.0, bq * bq - a * (q.squaredNorm() - r * r));
      const double sq = std::sqrt(disc);
      const double t = regime == Regime::kCircleNear ? (-bq - sq) / a : (-bq + sq) / a;
      p = s.u + t * e;
    }
  }
  return std::clamp(cw_angle(bt, p - b), 0.0, kHalfPi);
}

std::vector<double> critical_angles(const Segment2& s, double r) {
  std::vector<double> crit = {0.0, kPi};
  for (const Vec2& p : {s.u, s.v}) {
    solve_trig(p, p.squaredNorm() / (2.0 * r), crit);  // |p - b| = r
    if (p.norm() <= r * (1.0 + 1e-12) && p.norm() > 0.0) crit.push_back(wrap(std::atan2(p.y(), p.x())));
    solve_trig(p, r, crit);  // p on the quarter-turn radius
  }
  const Vec2 e = s.v - s.u;
  if (e.norm() > 0.0) {
    const Vec2 n = Vec2(-e.y(), e.x()).normalized();
    const double h = n.dot(s.u);
    solve_trig(n, h / (std::sqrt(2.0) * r), crit, -kPi / 4.0);  // farthest sweep point on the line
    solve_trig(n, (h + r) / r, crit);                            // line tangent to the bc disk
    solve_trig(n, (h - r) / r, crit);
    solve_trig(n, h / r, crit);  // line through b
  }
  std::sort(crit.begin(), crit.end());
  std::vector<double> out;
  for (double c : crit) {
    if (out.empty() || c - out.back() > kAngleEps) out.push_back(c);
  }
  if (kTwoPi - out.back() > kAngleEps) out.push_back(kTwoPi);
  else out.back() = kTwoPi;
  return out;
}

void add_pieces(PlanarInstance& inst, const Segment2& seg, int source) {
  const double r = inst.r;
  const double r2 = std::sqrt(2.0) * r;
  const double tol = 1e-12 * r;
  if (seg.length() == 0.0) {
    const double n = seg.u.norm();
    if (n <= r) inst.pieces.push_back({seg, source, true});
    else if (n < r2) inst.pieces.push_back({seg, source, false});
    return;
  }
  for (const auto& piece : clip_segment_by_circle(seg, {Vec2::Zero(), r}, tol)) {
    if (piece.inside) {
      inst.pieces.push_back({piece.segment, source, true});
      continue;
    }
    for (const auto& outer : clip_segment_by_circle(piece.segment, {Vec2::Zero(), r2}, tol)) {
      if (outer.inside) inst.pieces.push_back({outer.segment, source, false});
    }
  }
}

}  // namespace

PlanarInstance build_planar_instance(double r, const std::vector<Segment2>& segments, Sense sense) {
  PlanarInstance inst;
  inst.r = r;
  inst.sense = sense;
  inst.segments = segments;
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    const Segment2 c{inst.to_canonical(segments[i].u), inst.to_canonical(segments[i].v)};
    add_pieces(inst, c, i);
  }
  return inst;
}

std::vector<Segment2> plane_sections(const Scene& scene, const Plane3& plane) {
  const PlaneFrame frame = PlaneFrame::of(plane);
  const double tol = scene.tolerance().len * scene.diameter();
  std::vector<Segment2> out;
  for (const auto& tri : scene.triangles()) {
    const CrossSection cs = tri_plane_cross_section(tri, plane, tol);
    switch (cs.kind) {
      case SectionKind::kEmpty:
        break;
      case SectionKind::kPoint:
      case SectionKind::kSegment:
        out.push_back({frame.to_local(cs.a), frame.to_local(cs.b)});
        break;
      case SectionKind::kCoplanar:
        for (int k = 0; k < 3; ++k) {
          out.push_back({frame.to_local(tri.v[k]), frame.to_local(tri.v[(k + 1) % 3])});
        }
        break;
    }
  }
  return out;
}

PlanarInstance build_planar_instance(const Scene& scene, const Plane3& plane, Sense sense) {
  return build_planar_instance(scene.r(), plane_sections(scene, plane), sense);
}

std::optional<double> limiting_rotation(const Segment2& piece, double r, double theta) {
  const Contact c = evaluate(piece, r, theta);
  if (c.kind == Contact::kNone) return std::nullopt;
  if (c.kind == Contact::kZero) return 0.0;
  return std::clamp(c.alpha, 0.0, kHalfPi);
}

double rho_s(const PlanarInstance& inst, const CurvePiece& c, double theta) {
  const double slack = 1e-9;
  if (theta < c.lo - slack || theta > c.hi + slack) throw OutOfDomain("theta outside the curve domain");
  return regime_alpha(inst.pieces[c.piece].seg, inst.r, std::clamp(theta, c.lo, c.hi), c.regime);
}

double f_s(const PlanarInstance& inst, const CurvePiece& c, double theta) {
  return std::sin(0.5 * rho_s(inst, c, theta));
}

void piece_curves(const PlanarInstance& inst, int piece, std::vector<CurvePiece>& curves,
                  std::vector<Interval>& forbidden) {
  const PlanarPiece& pp = inst.pieces[piece];
  const auto crit = critical_angles(pp.seg, inst.r);
  bool open = false;  // whether curves.back() may be extended
  for (std::size_t k = 0; k + 1 < crit.size(); ++k) {
    const double lo = crit[k];
    const double hi = crit[k + 1];
    const Contact c = evaluate(pp.seg, inst.r, 0.5 * (lo + hi));
    if (c.kind == Contact::kZero) {
      if (!forbidden.empty() && forbidden.back().hi == lo) {
        forbidden.back().hi = hi;
      } else {
        forbidden.push_back({lo, hi});
      }
    }
    if (c.kind != Contact::kAt) {
      open = false;
      continue;
    }
    if (open && curves.back().regime == c.regime && lo != kPi) {
      curves.back().hi = hi;
    } else {
      curves.push_back({piece, pp.source, pp.inside, c.regime, lo, hi});
      open = true;
    }
  }
}

namespace {

// Roots of f_i - f_j on [lo, hi].
std::vector<double> crossings_in(const PlanarInstance& inst, const CurvePiece& ci, const CurvePiece& cj, double lo,
                                 double hi, bool* closed_form = nullptr) {
  if (closed_form) *closed_form = false;
  if (!(hi > lo)) return {};
  auto g = [&](double th) { return f_s(inst, ci, th) - f_s(inst, cj, th); };
  // Only proper sign changes inside (lo, hi) count; pieces of one segment
  // touch at their shared end and pinned curves blow up where b meets p.
  std::vector<double> roots;
  for (double x : scalar_roots(g, lo, hi, 8, 1e-15)) {
    const double h = std::min({1e-7, 0.5 * (x - lo), 0.5 * (hi - x)});
    if (h <= 0.0 || std::abs(g(x)) > 1e-9) continue;  // a jump, not a crossing
    const double gl = g(x - h), gr = g(x + h);
    if ((gl < 0.0 && gr > 0.0) || (gl > 0.0 && gr < 0.0)) roots.push_back(x);
  }
  if (ci.pinned() && cj.pinned() && !roots.empty()) {
    // Both rotations pinned at endpoints p, q: b lies on line(p, q) ∩ the bc circle.
    const Segment2& si = inst.pieces[ci.piece].seg;
    const Segment2& sj = inst.pieces[cj.piece].seg;
    const Vec2 p = ci.regime == Regime::kPinnedU ? si.u : si.v;
    const Vec2 q = cj.regime == Regime::kPinnedU ? sj.u : sj.v;
    const Vec2 e = q - p;
    if (e.norm() > 0.0) {
      const Vec2 n = Vec2(-e.y(), e.x()).normalized();
      std::vector<double> cand;
      solve_trig(n, n.dot(p) / inst.r, cand);
      for (double& root : roots) {
        for (double c : cand) {
          if (std::abs(c - root) < 1e-7 && c >= lo && c <= hi) {
            root = c;
            if (closed_form) *closed_form = true;
          }
        }
      }
    }
  }
  return roots;
}

double fval(const Envelope& env, int curve, double th) { return f_s(*env.instance, env.curves[curve], th); }

std::vector<EnvelopeArc> merge(const Envelope& env, const std::vector<EnvelopeArc>& a,
                               const std::vector<EnvelopeArc>& b, std::size_t& crossings) {
  std::vector<double> cuts;
  for (const auto& x : a) {
    cuts.push_back(x.lo);
    cuts.push_back(x.hi);
  }
  for (const auto& x : b) {
    cuts.push_back(x.lo);
    cuts.push_back(x.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<EnvelopeArc> out;
  auto push = [&](double lo, double hi, int curve) {
    if (!(hi > lo)) return;
    if (!out.empty() && out.back().curve == curve && out.back().hi == lo) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi, curve});
    }
  };
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const double mid = 0.5 * (lo + hi);
    while (ia < a.size() && a[ia].hi <= mid) ++ia;
    while (ib < b.size() && b[ib].hi <= mid) ++ib;
    const int ca = ia < a.size() && a[ia].lo <= mid ? a[ia].curve : -1;
    const int cb = ib < b.size() && b[ib].lo <= mid ? b[ib].curve : -1;
    if (ca < 0 && cb < 0) continue;
    if (ca < 0 || cb < 0) {
      push(lo, hi, ca < 0 ? cb : ca);
      continue;
    }
    auto roots = crossings_in(*env.instance, env.curves[ca], env.curves[cb], lo, hi);
    crossings += roots.size();
    double start = lo;
    roots.push_back(hi);
    for (double end : roots) {
      if (end <= start) continue;
      const double m = 0.5 * (start + end);
      push(start, end, fval(env, ca, m) <= fval(env, cb, m) ? ca : cb);
      start = end;
    }
  }
  return out;
}

std::vector<EnvelopeArc> build_range(const Envelope& env, const std::vector<int>& order, std::size_t lo,
                                     std::size_t hi, std::size_t& crossings) {
  if (hi - lo == 1) {
    const CurvePiece& c = env.curves[order[lo]];
    return {{c.lo, c.hi, order[lo]}};
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(env, build_range(env, order, lo, mid, crossings), build_range(env, order, mid, hi, crossings),
               crossings);
}

}  // namespace

std::optional<CurveCrossing> curve_intersection(const PlanarInstance& inst, const CurvePiece& ci,
                                                const CurvePiece& cj) {
  const double lo = std::max(ci.lo, cj.lo);
  const double hi = std::min(ci.hi, cj.hi);
  bool closed = false;
  const auto roots = crossings_in(inst, ci, cj, lo, hi, &closed);
  if (roots.empty()) return std::nullopt;
  CurveCrossing out;
  out.theta = roots.front();
  out.x_b = inst.r * std::cos(out.theta);
  out.closed_form = closed;
  const double h = std::min(1e-6, 0.5 * (out.theta - lo));
  if (h > 0.0) {
    out.first_lower_before = f_s(inst, ci, out.theta - h) < f_s(inst, cj, out.theta - h);
  } else {
    const double h2 = std::min(1e-6, 0.5 * (hi - out.theta));
    out.first_lower_before = !(f_s(inst, ci, out.theta + h2) < f_s(inst, cj, out.theta + h2));
  }
  return out;
}

Envelope build_envelopes(const PlanarInstance& inst) {
  Envelope env;
  env.instance = std::make_shared<const PlanarInstance>(inst);
  std::vector<Interval> forbidden;
  for (int i = 0; i < static_cast<int>(inst.pieces.size()); ++i) piece_curves(inst, i, env.curves, forbidden);
  std::sort(forbidden.begin(), forbidden.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& f : forbidden) {
    if (!env.forbidden.empty() && f.lo <= env.forbidden.back().hi) {
      env.forbidden.back().hi = std::max(env.forbidden.back().hi, f.hi);
    } else {
      env.forbidden.push_back(f);
    }
  }
  if (env.curves.empty()) return env;
  std::vector<int> order(env.curves.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return env.curves[a].lo < env.curves[b].lo; });
  env.arcs = build_range(env, order, 0, order.size(), env.merge_crossings);
  return env;
}

std::vector<EnvelopeSpan> Envelope::upper() const {
  std::vector<EnvelopeSpan> out;
  const double r = instance->r;
  for (const auto& a : arcs) {
    if (a.hi <= kPi) out.push_back({r * std::cos(a.hi), r * std::cos(a.lo), curves[a.curve].source});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<EnvelopeSpan> Envelope::lower() const {
  std::vector<EnvelopeSpan> out;
  const double r = instance->r;
  for (const auto& a : arcs) {
    if (a.lo >= kPi) out.push_back({r * std::cos(a.lo), r * std::cos(a.hi), curves[a.curve].source});
  }
  return out;
}

std::optional<double> Envelope::value(double theta) const {
  auto it = std::upper_bound(arcs.begin(), arcs.end(), theta,
                             [](double th, const EnvelopeArc& a) { return th < a.lo; });
  if (it == arcs.begin()) return std::nullopt;
  --it;
  if (theta > it->hi) return std::nullopt;
  return f_s(*instance, curves[it->curve], theta);
}

bool Envelope::is_forbidden(double theta) const {
  auto it = std::upper_bound(forbidden.begin(), forbidden.end(), theta,
                             [](double th, const Interval& a) { return th < a.lo; });
  if (it == forbidden.begin()) return false;
  --it;
  return theta <= it->hi;
}

double canonical_theta(const PlanarInstance& inst, const Vec2& b) {
  const Vec2 c = inst.to_canonical(b);
  return wrap(std::atan2(c.y(), c.x()));
}

bool query_sector_empty(const Envelope& env, const Vec2& b, double rho, Sense sense) {
  const PlanarInstance& inst = *env.instance;
  if (sense != inst.sense) throw SenseMismatch("query sense differs from the envelope sense");
  if (rho < 0.0 || rho > kHalfPi + 1e-12) throw OutOfDomain("rotation angle outside [0, pi/2]");
  if (std::abs(b.norm() - inst.r) > 1e-8 * std::max(1.0, inst.r)) throw OutOfDomain("elbow is not on C");
  const double th = canonical_theta(inst, b);
  if (env.is_forbidden(th)) return false;
  const Sector2 sector = Sector2::at(inst.to_canonical(b), Vec2::Zero(), rho, Sense::kCcw);
  auto it = std::upper_bound(env.arcs.begin(), env.arcs.end(), th,
                             [](double t, const EnvelopeArc& a) { return t < a.lo; });
  // The arc containing θ, and its left neighbour when θ sits on a breakpoint.
  for (int k = 0; k < 2 && it != env.arcs.begin(); ++k) {
    --it;
    if (th > it->hi) break;
    const PlanarPiece& p = inst.pieces[env.curves[it->curve].piece];
    if (sector_segment_intersect_2d(sector, p.seg)) return false;
    if (th > it->lo) break;
  }
  return true;
}

bool brute_force_sector_empty(const PlanarInstance& inst, const Vec2& b, double rho, Sense sense) {
  const Sector2 sector = Sector2::at(b, Vec2::Zero(), rho, sense);
  for (const auto& s : inst.segments) {
    if (sector_segment_intersect_2d(sector, s)) return false;
  }
  return true;
}

PlanarInstance load_planar_document(const std::string& document, Sense sense) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("instance must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "r" && k != "segments") throw SchemaError("unknown key: " + k);
  }
  if (!doc.contains("r") || !doc["r"].is_number()) throw SchemaError("r must be a number");
  if (!doc.contains("segments") || !doc["segments"].is_array()) throw SchemaError("segments must be an array");
  const double r = doc["r"].get<double>();
  if (!(r > 0.0)) throw ValidationError("r must be positive");
  std::vector<Segment2> segs;
  for (const auto& s : doc["segments"]) {
    if (!s.is_array() || s.size() != 2) throw SchemaError("each segment must list 2 points");
    Vec2 p[2];
    for (int k = 0; k < 2; ++k) {
      if (!s[k].is_array() || s[k].size() != 2 || !s[k][0].is_number() || !s[k][1].is_number()) {
        throw SchemaError("segment points must be [x, y]");
      }
      p[k] = {s[k][0].get<double>(), s[k][1].get<double>()};
    }
    segs.push_back({p[0], p[1]});
  }
  return build_planar_instance(r, segs, sense);
}

}  // namespace probe
