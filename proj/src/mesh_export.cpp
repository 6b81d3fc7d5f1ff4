#include "probe/mesh_export.hpp"

#include <cmath>
#include <sstream>

namespace probe {

std::string mesh_obj(const Scene& scene, const std::optional<Trajectory>& t, int wedges, MeshStats* stats) {
  std::ostringstream f;
  f.precision(17);
  const Vec3 origin = scene.target();
  MeshStats st;
  auto vertex = [&](const Vec3& p) {
    const Vec3 q = p + origin;
    f << "v " << q.x() << " " << q.y() << " " << q.z() << "\n";
    return ++st.vertices;
  };
  auto face = [&](int a, int b, int c) {
    f << "f " << a << " " << b << " " << c << "\n";
    ++st.faces;
  };

  f << "o obstacles\n";
  for (const auto& tri : scene.triangles()) {
    const int a = vertex(tri.v[0]), b = vertex(tri.v[1]), c = vertex(tri.v[2]);
    face(a, b, c);
  }
  if (t) {
    const double r = scene.r();
    const Segment3 ins = t->insertion(r, scene.big_r());
    const Vec3 axis = ins.direction().normalized();
    const Vec3 u = axis.unitOrthogonal();
    const Vec3 w = axis.cross(u);
    const double width = 0.01 * r;
    f << "o insertion\n";
    int ring[2][3];
    for (int end = 0; end < 2; ++end) {
      const Vec3 base = end == 0 ? ins.u : ins.v;
      for (int k = 0; k < 3; ++k) {
        const double a = 2 * kPi * k / 3;
        ring[end][k] = vertex(base + width * (std::cos(a) * u + std::sin(a) * w));
      }
    }
    face(ring[0][0], ring[0][2], ring[0][1]);
    face(ring[1][0], ring[1][1], ring[1][2]);
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3;
      face(ring[0][k], ring[0][k1], ring[1][k1]);
      face(ring[0][k], ring[1][k1], ring[1][k]);
    }
    if (t->rho > 0.0 && wedges > 0) {
      const CircularSector s = CircularSector::of(*t, r);
      const Vec3 perp = (s.end - s.end.dot(s.start) * s.start).normalized();
      f << "o sector\n";
      const int apex = vertex(s.apex);
      int prev = vertex(s.apex + s.radius * s.start);
      for (int k = 1; k <= wedges; ++k) {
        const double phi = s.angle * k / wedges;
        const int cur = vertex(s.apex + s.radius * (std::cos(phi) * s.start + std::sin(phi) * perp));
        face(apex, prev, cur);
        prev = cur;
      }
      st.sector_wedges = wedges;
    }
  }
  if (stats) *stats = st;
  return f.str();
}

}  // namespace probe
