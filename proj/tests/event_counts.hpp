#pragma once

// Closed-form event counts per case row, computed from pool sizes that are
// derived here without the library's enumeration code.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "probe/scene.hpp"

namespace counts {

struct Pools {
  std::uint64_t outside = 0;       // edge pieces outside C
  std::uint64_t inside = 0;        // edge pieces inside C
  std::uint64_t near_outside = 0;  // outside pieces within 2r of t
  std::uint64_t vertices = 0;
  std::uint64_t v_inside = 0;      // |v| <= r
  std::uint64_t v_near = 0;        // |v| <= 2r
  std::uint64_t t_near = 0;        // triangles within 2r
  std::uint64_t edges = 0;         // unsplit

  std::uint64_t all() const { return outside + inside; }
  std::uint64_t near() const { return inside + near_outside; }
};

inline double origin_distance(const probe::Vec3& u, const probe::Vec3& v) {
  const probe::Vec3 e = v - u;
  const double len2 = e.squaredNorm();
  double t = len2 > 0 ? -u.dot(e) / len2 : 0.0;
  t = std::min(1.0, std::max(0.0, t));
  return (u + t * e).norm();
}

inline Pools pools_of(const probe::Scene& scene) {
  Pools p;
  const double r = scene.r();
  for (const auto& edge : scene.edges()) {
    ++p.edges;
    const probe::Vec3 u = edge.seg.u, e = edge.seg.v - edge.seg.u;
    // |u + s e|^2 = r^2
    const double A = e.squaredNorm(), B = 2 * u.dot(e), C = u.squaredNorm() - r * r;
    std::vector<double> cuts = {0.0};
    const double disc = B * B - 4 * A * C;
    if (disc > 0) {
      for (double s : {(-B - std::sqrt(disc)) / (2 * A), (-B + std::sqrt(disc)) / (2 * A)}) {
        if (s > 1e-12 && s < 1 - 1e-12) cuts.push_back(s);
      }
    }
    cuts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const probe::Vec3 a = u + cuts[k] * e, b = u + cuts[k + 1] * e;
      if ((0.5 * (a + b)).norm() <= r) {
        ++p.inside;
      } else {
        ++p.outside;
        if (origin_distance(a, b) <= 2 * r) ++p.near_outside;
      }
    }
  }
  for (const auto& v : scene.vertices()) {
    ++p.vertices;
    if (v.p.norm() <= r) ++p.v_inside;
    if (v.p.norm() <= 2 * r) ++p.v_near;
  }
  for (const auto& t : scene.triangles()) {
    if (probe::point_triangle_distance(probe::Vec3::Zero(), t) <= 2 * r) ++p.t_near;
  }
  return p;
}

inline std::uint64_t C(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

// n - k clamped at zero
inline std::uint64_t sub(std::uint64_t n, std::uint64_t k) { return n > k ? n - k : 0; }

inline std::map<std::string, std::uint64_t> expected(const Pools& p) {
  const std::uint64_t o = p.outside, i = p.inside, a = p.all(), n2 = p.near(), n2o = p.near_outside;
  const std::uint64_t V = p.vertices, Vi = p.v_inside, V2 = p.v_near, T = p.t_near;
  const std::uint64_t a16 = i * sub(i, 1) * o + n2o * i * sub(o, 1);
  const std::uint64_t pair_near = C(o, 2) * n2 - n2o * sub(o, 1);  // (pair of ab, near edge not in it)
  std::map<std::string, std::uint64_t> m;
  m["U1"] = V;
  m["U2"] = C(p.edges, 2);
  m["A1"] = o * sub(a, 2) * i * V2;
  m["A2"] = o * i * C(sub(a, 2), 2);
  m["A3"] = o * C(i, 2) * sub(a, 3);
  m["A4"] = o * i * C(V2, 2);
  m["A5"] = C(i, 2) * V2 * o;
  m["A6"] = C(o, 2) * i * V2;
  m["A7"] = C(o, 2) * sub(a, 2) * V2;
  m["A8"] = C(o, 2) * i * sub(a, 3);
  m["A9"] = C(o, 2) * C(sub(a, 2), 2);
  m["A10"] = C(o, 2) * C(i, 2);
  m["A11"] = C(o, 2) * C(V2, 2);
  m["A12"] = C(o, 3) * sub(a, 3);
  m["A13"] = C(o, 3) * i;
  m["A14"] = C(o, 3) * V2;
  m["A15"] = C(o, 4);
  m["A16"] = a16;
  m["A17"] = a16 * sub(a, 3);
  m["A18"] = a16 * V2;
  m["A19"] = i * C(sub(i, 1), 2) * o + n2o * C(i, 2) * sub(o, 1);
  m["A20"] = sub(a, 3) * pair_near;
  m["A21"] = i * sub(i, 1) * C(o, 2) + n2o * i * C(sub(o, 1), 2);
  m["A22"] = V2 * pair_near;
  m["A16S"] = T * i * o;
  m["A17S"] = T * i * o * sub(a, 2);
  m["A18S"] = T * i * o * V2;
  m["A19S"] = T * C(i, 2) * o;
  m["A20S"] = C(o, 2) * sub(a, 2) * T;
  m["A21S"] = T * i * C(o, 2);
  m["A22S"] = C(o, 2) * V2 * T;
  m["AV1"] = C(V, 2);
  m["AV2"] = V * C(a, 2);
  m["AV3"] = Vi * C(a, 2);
  m["AV4"] = Vi * sub(V, 1);
  m["AV5"] = Vi * sub(V2, 1) * a;
  m["AV6"] = V2 * sub(V, 1) * a;
  m["AV7"] = i * V * sub(a, 1);
  m["AV8"] = C(i, 2) * V;
  m["AV9"] = i * V2 * sub(V, 1);
  return m;
}

}  // namespace counts
