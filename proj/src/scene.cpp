#include "probe/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace probe {

using nlohmann::json;

Scene::Scene(double r, double big_r, const Vec3& target, std::vector<Triangle3> raw_triangles,
             const Tolerance& tol)
    : r_(r), big_r_(big_r), target_(target), raw_triangles_(std::move(raw_triangles)), tol_(tol) {
  triangles_.reserve(raw_triangles_.size());
  for (const auto& t : raw_triangles_) {
    triangles_.push_back({{t.v[0] - target_, t.v[1] - target_, t.v[2] - target_}});
  }
  build_caches();
}

void Scene::build_caches() {
  cache_.clear();
  edges_.clear();
  vertices_.clear();
  using Key3 = std::array<double, 3>;
  auto key = [](const Vec3& p) { return Key3{p.x(), p.y(), p.z()}; };
  std::map<std::pair<Key3, Key3>, int> edge_index;
  std::map<Key3, int> vertex_index;
  for (int i = 0; i < static_cast<int>(triangles_.size()); ++i) {
    const Triangle3& t = triangles_[i];
    TriangleCache c;
    c.unit_normal = t.unit_normal();
    c.center = t.centroid();
    c.radius = 0.0;
    for (const Vec3& v : t.v) c.radius = std::max(c.radius, (v - c.center).norm());
    cache_.push_back(c);
    for (int k = 0; k < 3; ++k) {
      if (vertex_index.emplace(key(t.v[k]), static_cast<int>(vertices_.size())).second) {
        vertices_.push_back({t.v[k], i, k});
      }
      auto ka = key(t.v[k]);
      auto kb = key(t.v[(k + 1) % 3]);
      if (kb < ka) std::swap(ka, kb);
      if (edge_index.emplace(std::make_pair(ka, kb), static_cast<int>(edges_.size())).second) {
        edges_.push_back({t.edge(k), i, k});
      }
    }
  }
}

SceneStats scene_stats(const Scene& scene) {
  SceneStats s;
  s.triangles = scene.size();
  s.edges = 3 * scene.size();
  s.unique_edges = scene.edges().size();
  s.vertices = scene.vertices().size();
  const double r = scene.r();
  for (const auto& tri : scene.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const Segment3 e = tri.edge(k);
      const bool u_in = e.u.norm() <= r;
      const bool v_in = e.v.norm() <= r;
      if (u_in && v_in) {
        ++s.edges_inside;
      } else if (u_in != v_in || point_segment_distance(Vec3::Zero(), e) < r) {
        ++s.edges_crossing;
      } else {
        ++s.edges_outside;
      }
    }
  }
  return s;
}

namespace {

bool coplanar_overlap(const Triangle3& a, const Triangle3& b, double tol) {
  const Vec3 n = a.unit_normal();
  const Vec3 x = (a.v[1] - a.v[0]).normalized();
  const Vec3 y = n.cross(x);
  auto local = [&](const Vec3& p) { return Vec2((p - a.v[0]).dot(x), (p - a.v[0]).dot(y)); };
  std::array<Vec2, 3> pa, pb;
  for (int i = 0; i < 3; ++i) {
    pa[i] = local(a.v[i]);
    pb[i] = local(b.v[i]);
  }
  // Proper edge crossings.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vec2 p = pa[i], q = pa[(i + 1) % 3];
      const Vec2 u = pb[j], v = pb[(j + 1) % 3];
      const double d1 = cross2(q - p, u - p), d2 = cross2(q - p, v - p);
      const double d3 = cross2(v - u, p - u), d4 = cross2(v - u, q - u);
      const double sp = (q - p).norm(), su = (v - u).norm();
      if (((d1 > tol * sp && d2 < -tol * sp) || (d1 < -tol * sp && d2 > tol * sp)) &&
          ((d3 > tol * su && d4 < -tol * su) || (d3 < -tol * su && d4 > tol * su))) {
        return true;
      }
    }
  }
  // Containment, including identical triangles: a centroid strictly inside the other.
  auto strictly_inside = [&](const Vec2& p, const std::array<Vec2, 3>& t) {
    const double o = cross2(t[1] - t[0], t[2] - t[0]) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 e = t[(i + 1) % 3] - t[i];
      if (o * cross2(e, p - t[i]) <= tol * e.norm()) return false;
    }
    return true;
  };
  const Vec2 ca = (pa[0] + pa[1] + pa[2]) / 3.0;
  const Vec2 cb = (pb[0] + pb[1] + pb[2]) / 3.0;
  return strictly_inside(ca, pb) || strictly_inside(cb, pa);
}

}  // namespace

bool triangles_interpenetrate(const Triangle3& a, const Triangle3& b, double tol) {
  const Vec3 na = a.unit_normal();
  bool coplanar = true;
  for (const Vec3& v : b.v) {
    if (std::abs(na.dot(v - a.v[0])) > tol) coplanar = false;
  }
  if (coplanar) return coplanar_overlap(a, b, tol);
  for (int k = 0; k < 3; ++k) {
    if (seg_triangle_stabs(a.edge(k), b, tol) || seg_triangle_stabs(b.edge(k), a, tol)) return true;
  }
  return false;
}

void validate_scene(const Scene& scene) {
  const Tolerance& tol = scene.tolerance();
  if (!(scene.r() > 0.0) || !std::isfinite(scene.r())) throw ValidationError("r must be positive");
  if (!(scene.big_r() > 0.0) || !std::isfinite(scene.big_r())) throw ValidationError("R must be positive");
  if (scene.r() > scene.big_r()) throw ValidationError("r exceeds R");
  const double area_tol = tol.area * scene.diameter() * scene.diameter();
  const auto& tris = scene.triangles();
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const Triangle3& t = tris[i];
    for (const Vec3& v : t.v) {
      if (!v.allFinite()) throw ValidationError("non-finite coordinate in triangle " + std::to_string(i));
      if (!(v.norm() < scene.big_r())) {
        throw ValidationError("triangle " + std::to_string(i) + " leaves the enclosing sphere");
      }
    }
    if (!(t.area() > area_tol)) throw ValidationError("degenerate triangle " + std::to_string(i));
    if (!(point_triangle_distance(Vec3::Zero(), t) > tol.incidence)) {
      throw ValidationError("target inside obstacle " + std::to_string(i));
    }
  }
  const auto& cache = scene.cache();
  for (std::size_t i = 0; i < tris.size(); ++i) {
    for (std::size_t j = i + 1; j < tris.size(); ++j) {
      if ((cache[i].center - cache[j].center).norm() > cache[i].radius + cache[j].radius + tol.incidence) continue;
      if (triangles_interpenetrate(tris[i], tris[j], tol.incidence)) {
        throw ValidationError("triangles " + std::to_string(i) + " and " + std::to_string(j) + " interpenetrate");
      }
    }
  }
}

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec3 point3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(std::string(what) + " must be an array of 3 numbers");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

json to_json(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }

}  // namespace

Scene load_scene(const std::string& document, const Tolerance& tol) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("scene must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "r" && k != "R" && k != "target" && k != "triangles") throw SchemaError("unknown key: " + k);
  }
  if (!doc.contains("r")) throw SchemaError("missing key: r");
  if (!doc.contains("target")) throw SchemaError("missing key: target");
  if (!doc.contains("triangles")) throw SchemaError("missing key: triangles");
  const double r = number(doc["r"], "r");
  const Vec3 target = point3(doc["target"], "target");
  const json& jt = doc["triangles"];
  if (!jt.is_array()) throw SchemaError("triangles must be an array");
  std::vector<Triangle3> tris;
  tris.reserve(jt.size());
  for (const auto& t : jt) {
    if (!t.is_array() || t.size() != 3) throw SchemaError("each triangle must list 3 vertices");
    tris.push_back({{point3(t[0], "vertex"), point3(t[1], "vertex"), point3(t[2], "vertex")}});
  }
  double big_r;
  if (doc.contains("R")) {
    big_r = number(doc["R"], "R");
  } else {
    double far = 0.0;
    for (const auto& t : tris) {
      for (const Vec3& v : t.v) far = std::max(far, (v - target).norm());
    }
    big_r = std::max(1.05 * far, r);
  }
  tol.validate();
  Scene scene(r, big_r, target, std::move(tris), tol);
  validate_scene(scene);
  return scene;
}

Scene load_scene_file(const std::string& path, const Tolerance& tol) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scene(ss.str(), tol);
}

std::string save_scene(const Scene& scene) {
  json doc;
  doc["r"] = scene.r();
  doc["R"] = scene.big_r();
  doc["target"] = to_json(scene.target());
  json tris = json::array();
  for (const auto& t : scene.raw_triangles()) {
    tris.push_back(json::array({to_json(t.v[0]), to_json(t.v[1]), to_json(t.v[2])}));
  }
  doc["triangles"] = std::move(tris);
  return doc.dump(1) + "\n";
}

void save_scene_file(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << save_scene(scene);
}

Planted parse_planted(const std::string& s) {
  if (s == "none") return Planted::kNone;
  if (s == "unarticulated") return Planted::kUnarticulated;
  if (s == "articulated") return Planted::kArticulated;
  throw std::invalid_argument("planted must be none, unarticulated or articulated");
}

const char* to_string(Planted p) {
  switch (p) {
    case Planted::kNone: return "none";
    case Planted::kUnarticulated: return "unarticulated";
    case Planted::kArticulated: return "articulated";
  }
  return "none";
}

std::vector<Triangle3> icosphere_shell(double radius) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                         {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto k = std::minmax(a, b);
    auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    v.push_back((v[a] + v[b]).normalized());
    const int id = static_cast<int>(v.size()) - 1;
    mid.emplace(k, id);
    return id;
  };
  std::vector<Triangle3> out;
  for (const auto& f : faces) {
    const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
    for (const auto& g : {std::array<int, 3>{f[0], a, c}, {f[1], b, a}, {f[2], c, b}, {a, b, c}}) {
      out.push_back({{radius * v[g[0]], radius * v[g[1]], radius * v[g[2]]}});
    }
  }
  return out;
}

}  // namespace probe
