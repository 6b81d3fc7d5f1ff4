#include "probe/events.hpp"

#include <algorithm>
#include <cmath>

namespace probe {

namespace {

constexpr std::array<const char*, static_cast<std::size_t>(CaseId::kCount)> kCaseNames = {
    "U1",   "U2",   "A1",   "A2",   "A3",   "A4",   "A5",   "A6",   "A7",   "A8",   "A9",  "A10", "A11", "A12",
    "A13",  "A14",  "A15",  "A16",  "A17",  "A18",  "A19",  "A20",  "A21",  "A22",  "A16S", "A17S", "A18S",
    "A19S", "A20S", "A21S", "A22S", "AV1",  "AV2",  "AV3",  "AV4",  "AV5",  "AV6",  "AV7",  "AV8",  "AV9"};

using Sink = std::function<void(const ExtremalEvent&)>;

struct Emitter {
  CaseId id;
  const Sink& out;

  void operator()(std::initializer_list<Support> s) const {
    ExtremalEvent ev;
    ev.id = id;
    ev.count = static_cast<std::uint8_t>(s.size());
    std::copy(s.begin(), s.end(), ev.supports.begin());
    out(ev);
  }
};

Support E(int id, Role role) { return {SupportKind::kEdge, role, id}; }
Support V(int id, Role role) { return {SupportKind::kVertex, role, id}; }
Support T(int id, Role role) { return {SupportKind::kSurface, role, id}; }

// Loops over unordered pairs / triples of a pool.
template <class F>
void pairs(const std::vector<int>& pool, F&& f) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) f(pool[i], pool[j]);
  }
}

template <class F>
void triples(const std::vector<int>& pool, F&& f) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      for (std::size_t k = j + 1; k < pool.size(); ++k) f(pool[i], pool[j], pool[k]);
    }
  }
}

bool differs(int x, std::initializer_list<int> others) {
  return std::find(others.begin(), others.end(), x) == others.end();
}

// Splits a segment at the sphere |x| = r.
void split_at_sphere(const Segment3& s, double r, int edge, std::vector<EdgePiece>& out) {
  const Vec3 e = s.v - s.u;
  const double a = e.squaredNorm();
  const double b = s.u.dot(e);
  const double c = s.u.squaredNorm() - r * r;
  const double disc = b * b - a * c;
  std::vector<double> cuts = {0.0};
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / a, (-b + sq) / a}) {
      if (t > 1e-12 && t < 1.0 - 1e-12) cuts.push_back(t);
    }
  }
  cuts.push_back(1.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Segment3 piece{s.at(cuts[k]), s.at(cuts[k + 1])};
    const bool inside = s.at(0.5 * (cuts[k] + cuts[k + 1])).norm() <= r;
    out.push_back({piece, edge, inside});
  }
}

double origin_segment_distance(const Segment3& s) { return point_segment_distance(Vec3::Zero(), s); }

}  // namespace

const char* to_string(CaseId id) { return kCaseNames.at(static_cast<std::size_t>(id)); }

CaseId parse_case(const std::string& s) {
  for (std::size_t i = 0; i < kCaseNames.size(); ++i) {
    if (s == kCaseNames[i]) return static_cast<CaseId>(i);
  }
  throw UnsupportedCase("unknown case id: " + s);
}

std::vector<CaseId> articulated_cases() {
  std::vector<CaseId> out;
  for (int i = static_cast<int>(CaseId::kA1); i < static_cast<int>(CaseId::kCount); ++i) {
    out.push_back(static_cast<CaseId>(i));
  }
  return out;
}

const char* to_string(SupportKind k) {
  switch (k) {
    case SupportKind::kEdge:
    case SupportKind::kWholeEdge:
      return "edge";
    case SupportKind::kVertex:
      return "vertex";
    case SupportKind::kSurface:
      return "surface";
  }
  return "?";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::kAB:
      return "ab";
    case Role::kBC:
      return "bc";
    case Role::kProbe:
      return "probe";
    case Role::kBT:
      return "bt";
    case Role::kSector:
      return "sector";
    case Role::kArc:
      return "arc";
    case Role::kTangent:
      return "tangent";
  }
  return "?";
}

EventContext EventContext::of(const Scene& scene) {
  EventContext ctx;
  ctx.scene = &scene;
  const double r = scene.r();
  const auto& edges = scene.edges();
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    split_at_sphere(edges[i].seg, r, i, ctx.pieces);
    ctx.edges.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(ctx.pieces.size()); ++i) {
    const EdgePiece& p = ctx.pieces[i];
    ctx.all.push_back(i);
    (p.inside ? ctx.inside : ctx.outside).push_back(i);
    if (origin_segment_distance(p.seg) <= 2.0 * r) ctx.near.push_back(i);
  }
  const auto& verts = scene.vertices();
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
    const double n = verts[i].p.norm();
    ctx.vertices.push_back(i);
    if (n <= r) ctx.v_inside.push_back(i);
    if (n <= 2.0 * r) ctx.v_near.push_back(i);
  }
  const auto& tris = scene.triangles();
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    if (point_triangle_distance(Vec3::Zero(), tris[i]) <= 2.0 * r) ctx.t_near.push_back(i);
  }
  return ctx;
}

void enumerate_case(const EventContext& c, CaseId id, const Sink& out) {
  const Emitter emit{id, out};
  const auto& Eo = c.outside;
  const auto& Ei = c.inside;
  const auto& Ea = c.all;
  const auto& E2 = c.near;
  const auto& Va = c.vertices;
  const auto& Vi = c.v_inside;
  const auto& V2 = c.v_near;
  const auto& T2 = c.t_near;
  using R = Role;
  switch (id) {
    case CaseId::kU1:
      for (int v : Va) emit({V(v, R::kProbe)});
      break;
    case CaseId::kU2:
      pairs(c.edges, [&](int a, int b) {
        emit({{SupportKind::kWholeEdge, R::kProbe, a}, {SupportKind::kWholeEdge, R::kProbe, b}});
      });
      break;
    case CaseId::kA1:
      for (int ab : Eo)
        for (int bc : Ea)
          for (int bt : Ei) {
            if (!differs(bc, {ab, bt})) continue;
            for (int v : V2) emit({E(ab, R::kAB), E(bc, R::kBC), E(bt, R::kBT), V(v, R::kSector)});
          }
      break;
    case CaseId::kA2:
      for (int ab : Eo)
        for (int bt : Ei)
          pairs(Ea, [&](int x, int y) {
            if (differs(x, {ab, bt}) && differs(y, {ab, bt}))
              emit({E(ab, R::kAB), E(x, R::kBC), E(y, R::kBC), E(bt, R::kBT)});
          });
      break;
    case CaseId::kA3:
      for (int ab : Eo)
        pairs(Ei, [&](int x, int y) {
          for (int bc : Ea) {
            if (differs(bc, {ab, x, y})) emit({E(ab, R::kAB), E(bc, R::kBC), E(x, R::kBT), E(y, R::kBT)});
          }
        });
      break;
    case CaseId::kA4:
      for (int ab : Eo)
        for (int bt : Ei)
          pairs(V2, [&](int v, int w) { emit({E(ab, R::kAB), E(bt, R::kBT), V(v, R::kSector), V(w, R::kSector)}); });
      break;
    case CaseId::kA5:
      pairs(Ei, [&](int x, int y) {
        for (int v : V2)
          for (int ab : Eo) emit({E(ab, R::kAB), E(x, R::kBT), E(y, R::kBT), V(v, R::kSector)});
      });
      break;
    case CaseId::kA6:
      pairs(Eo, [&](int x, int y) {
        for (int bt : Ei)
          for (int v : V2) emit({E(x, R::kAB), E(y, R::kAB), E(bt, R::kBT), V(v, R::kSector)});
      });
      break;
    case CaseId::kA7:
      pairs(Eo, [&](int x, int y) {
        for (int bc : Ea) {
          if (!differs(bc, {x, y})) continue;
          for (int v : V2) emit({E(x, R::kAB), E(y, R::kAB), E(bc, R::kBC), V(v, R::kSector)});
        }
      });
      break;
    case CaseId::kA8:
      pairs(Eo, [&](int x, int y) {
        for (int bt : Ei)
          for (int bc : Ea) {
            if (differs(bc, {x, y, bt})) emit({E(x, R::kAB), E(y, R::kAB), E(bc, R::kBC), E(bt, R::kBT)});
          }
      });
      break;
    case CaseId::kA9:
      pairs(Eo, [&](int x, int y) {
        pairs(Ea, [&](int p, int q) {
          if (differs(p, {x, y}) && differs(q, {x, y}))
            emit({E(x, R::kAB), E(y, R::kAB), E(p, R::kBC), E(q, R::kBC)});
        });
      });
      break;
    case CaseId::kA10:
      pairs(Eo, [&](int x, int y) {
        pairs(Ei, [&](int p, int q) { emit({E(x, R::kAB), E(y, R::kAB), E(p, R::kBT), E(q, R::kBT)}); });
      });
      break;
    case CaseId::kA11:
      pairs(Eo, [&](int x, int y) {
        pairs(V2, [&](int v, int w) { emit({E(x, R::kAB), E(y, R::kAB), V(v, R::kSector), V(w, R::kSector)}); });
      });
      break;
    case CaseId::kA12:
      triples(Eo, [&](int x, int y, int z) {
        for (int bc : Ea) {
          if (differs(bc, {x, y, z})) emit({E(x, R::kAB), E(y, R::kAB), E(z, R::kAB), E(bc, R::kBC)});
        }
      });
      break;
    case CaseId::kA13:
      triples(Eo, [&](int x, int y, int z) {
        for (int bt : Ei) emit({E(x, R::kAB), E(y, R::kAB), E(z, R::kAB), E(bt, R::kBT)});
      });
      break;
    case CaseId::kA14:
      triples(Eo, [&](int x, int y, int z) {
        for (int v : V2) emit({E(x, R::kAB), E(y, R::kAB), E(z, R::kAB), V(v, R::kSector)});
      });
      break;
    case CaseId::kA15:
      for (std::size_t i = 0; i < Eo.size(); ++i)
        for (std::size_t j = i + 1; j < Eo.size(); ++j)
          for (std::size_t k = j + 1; k < Eo.size(); ++k)
            for (std::size_t l = k + 1; l < Eo.size(); ++l)
              emit({E(Eo[i], R::kAB), E(Eo[j], R::kAB), E(Eo[k], R::kAB), E(Eo[l], R::kAB)});
      break;
    case CaseId::kA16:
      for (int g : E2)
        for (int bt : Ei) {
          if (bt == g) continue;
          for (int ab : Eo) {
            if (ab != g) emit({E(ab, R::kAB), E(bt, R::kBT), E(g, R::kTangent)});
          }
        }
      break;
    case CaseId::kA17:
      for (int g : E2)
        for (int bt : Ei) {
          if (bt == g) continue;
          for (int ab : Eo) {
            if (ab == g) continue;
            for (int bc : Ea) {
              if (differs(bc, {g, bt, ab}))
                emit({E(ab, R::kAB), E(bc, R::kBC), E(bt, R::kBT), E(g, R::kTangent)});
            }
          }
        }
      break;
    case CaseId::kA18:
      for (int g : E2)
        for (int bt : Ei) {
          if (bt == g) continue;
          for (int ab : Eo) {
            if (ab == g) continue;
            for (int v : V2) emit({E(ab, R::kAB), E(bt, R::kBT), V(v, R::kSector), E(g, R::kTangent)});
          }
        }
      break;
    case CaseId::kA19:
      for (int g : E2)
        pairs(Ei, [&](int x, int y) {
          if (x == g || y == g) return;
          for (int ab : Eo) {
            if (ab != g) emit({E(ab, R::kAB), E(x, R::kBT), E(y, R::kBT), E(g, R::kTangent)});
          }
        });
      break;
    case CaseId::kA20:
      pairs(Eo, [&](int x, int y) {
        for (int bc : Ea) {
          if (!differs(bc, {x, y})) continue;
          for (int g : E2) {
            if (differs(g, {x, y, bc})) emit({E(x, R::kAB), E(y, R::kAB), E(bc, R::kBC), E(g, R::kArc)});
          }
        }
      });
      break;
    case CaseId::kA21:
      for (int g : E2)
        for (int bt : Ei) {
          if (bt == g) continue;
          pairs(Eo, [&](int x, int y) {
            if (x != g && y != g) emit({E(x, R::kAB), E(y, R::kAB), E(bt, R::kBT), E(g, R::kTangent)});
          });
        }
      break;
    case CaseId::kA22:
      pairs(Eo, [&](int x, int y) {
        for (int v : V2)
          for (int g : E2) {
            if (differs(g, {x, y})) emit({E(x, R::kAB), E(y, R::kAB), V(v, R::kSector), E(g, R::kArc)});
          }
      });
      break;
    case CaseId::kA16S:
      for (int s : T2)
        for (int bt : Ei)
          for (int ab : Eo) emit({E(ab, R::kAB), E(bt, R::kBT), T(s, R::kTangent)});
      break;
    case CaseId::kA17S:
      for (int s : T2)
        for (int bt : Ei)
          for (int ab : Eo)
            for (int bc : Ea) {
              if (differs(bc, {bt, ab})) emit({E(ab, R::kAB), E(bc, R::kBC), E(bt, R::kBT), T(s, R::kTangent)});
            }
      break;
    case CaseId::kA18S:
      for (int s : T2)
        for (int bt : Ei)
          for (int ab : Eo)
            for (int v : V2) emit({E(ab, R::kAB), E(bt, R::kBT), V(v, R::kSector), T(s, R::kTangent)});
      break;
    case CaseId::kA19S:
      for (int s : T2)
        pairs(Ei, [&](int x, int y) {
          for (int ab : Eo) emit({E(ab, R::kAB), E(x, R::kBT), E(y, R::kBT), T(s, R::kTangent)});
        });
      break;
    case CaseId::kA20S:
      pairs(Eo, [&](int x, int y) {
        for (int bc : Ea) {
          if (!differs(bc, {x, y})) continue;
          for (int s : T2) emit({E(x, R::kAB), E(y, R::kAB), E(bc, R::kBC), T(s, R::kArc)});
        }
      });
      break;
    case CaseId::kA21S:
      for (int s : T2)
        for (int bt : Ei)
          pairs(Eo, [&](int x, int y) { emit({E(x, R::kAB), E(y, R::kAB), E(bt, R::kBT), T(s, R::kTangent)}); });
      break;
    case CaseId::kA22S:
      pairs(Eo, [&](int x, int y) {
        for (int v : V2)
          for (int s : T2) emit({E(x, R::kAB), E(y, R::kAB), V(v, R::kSector), T(s, R::kArc)});
      });
      break;
    case CaseId::kAV1:
      pairs(Va, [&](int v, int w) { emit({V(v, R::kProbe), V(w, R::kProbe)}); });
      break;
    case CaseId::kAV2:
      for (int v : Va)
        pairs(Ea, [&](int x, int y) { emit({V(v, R::kProbe), E(x, R::kProbe), E(y, R::kProbe)}); });
      break;
    case CaseId::kAV3:
      for (int v : Vi)
        pairs(Ea, [&](int x, int y) { emit({V(v, R::kBT), E(x, R::kProbe), E(y, R::kProbe)}); });
      break;
    case CaseId::kAV4:
      for (int v : Vi)
        for (int w : Va) {
          if (w != v) emit({V(v, R::kBT), V(w, R::kProbe)});
        }
      break;
    case CaseId::kAV5:
      for (int v : Vi)
        for (int w : V2) {
          if (w == v) continue;
          for (int e : Ea) emit({V(v, R::kBT), V(w, R::kSector), E(e, R::kProbe)});
        }
      break;
    case CaseId::kAV6:
      for (int v : Va)
        for (int w : V2) {
          if (w == v) continue;
          for (int e : Ea) emit({V(v, R::kProbe), V(w, R::kSector), E(e, R::kProbe)});
        }
      break;
    case CaseId::kAV7:
      for (int bt : Ei)
        for (int v : Va)
          for (int e : Ea) {
            if (e != bt) emit({E(bt, R::kBT), V(v, R::kProbe), E(e, R::kProbe)});
          }
      break;
    case CaseId::kAV8:
      pairs(Ei, [&](int x, int y) {
        for (int v : Va) emit({E(x, R::kBT), E(y, R::kBT), V(v, R::kProbe)});
      });
      break;
    case CaseId::kAV9:
      for (int v : Va)
        for (int bt : Ei)
          for (int w : V2) {
            if (w != v) emit({V(v, R::kProbe), E(bt, R::kBT), V(w, R::kSector)});
          }
      break;
    case CaseId::kCount:
      throw UnsupportedCase("case id outside the catalog");
  }
}

void enumerate_unarticulated(const EventContext& ctx, const Sink& out) {
  enumerate_case(ctx, CaseId::kU1, out);
  enumerate_case(ctx, CaseId::kU2, out);
}

void enumerate_articulated(const EventContext& ctx, const Sink& out) {
  for (CaseId id : articulated_cases()) enumerate_case(ctx, id, out);
}

std::uint64_t count_case(const EventContext& ctx, CaseId id) {
  std::uint64_t n = 0;
  enumerate_case(ctx, id, [&](const ExtremalEvent&) { ++n; });
  return n;
}

nlohmann::json support_to_json(const EventContext& ctx, const Support& s) {
  const Scene& scene = *ctx.scene;
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["role"] = to_string(s.role);
  switch (s.kind) {
    case SupportKind::kEdge:
    case SupportKind::kWholeEdge: {
      const int e = s.kind == SupportKind::kEdge ? ctx.pieces.at(s.id).edge : s.id;
      j["triangle"] = scene.edges().at(e).triangle;
      j["edge"] = scene.edges().at(e).local;
      if (s.kind == SupportKind::kEdge) j["piece"] = ctx.pieces.at(s.id).inside ? "inside" : "outside";
      break;
    }
    case SupportKind::kVertex:
      j["triangle"] = scene.vertices().at(s.id).triangle;
      j["vertex"] = scene.vertices().at(s.id).local;
      break;
    case SupportKind::kSurface:
      j["triangle"] = s.id;
      break;
  }
  return j;
}

}  // namespace probe
