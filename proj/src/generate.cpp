#include <cmath>
#include <limits>
#include <random>

#include "probe/feasibility.hpp"
#include "probe/scene.hpp"

namespace probe {

namespace {

constexpr double kProbeRadius = 1.0;
constexpr double kOuterRadius = 4.0;
constexpr double kClearance = 0.05;   // planted probe vs obstacles
constexpr double kSeparation = 0.01;  // obstacle vs obstacle
constexpr long kMaxConsecutiveFailures = 10000;

Vec3 unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    const double x = g(rng);
    const double y = g(rng);
    const double z = g(rng);
    v = {x, y, z};
  } while (v.norm() < 1e-9);
  return v.normalized();
}

double triangle_distance(const Triangle3& a, const Triangle3& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    best = std::min(best, segment_triangle_distance(a.edge(k), b));
    best = std::min(best, segment_triangle_distance(b.edge(k), a));
  }
  return best;
}

}  // namespace

GeneratedScene generate_scene(int n, std::uint64_t seed, Planted planted) {
  if (n < 0) throw std::invalid_argument("triangle count must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = kProbeRadius;

  GeneratedScene out;
  Trajectory plant;
  if (planted == Planted::kArticulated) {
    const Vec3 bhat = unit_vector(rng);
    Vec3 w = unit_vector(rng);
    w = (w - w.dot(bhat) * bhat).normalized();
    const double rho = 0.2 + unit(rng) * (kHalfPi - 0.2);
    plant = make_trajectory(r * bhat, std::cos(rho) * (-bhat) + std::sin(rho) * w);
  } else if (planted == Planted::kUnarticulated) {
    plant = unarticulated(unit_vector(rng), r);
  }
  const Segment3 ins = plant.insertion(r, kOuterRadius);
  const CircularSector sec = CircularSector::of(plant, r);

  std::vector<Triangle3> tris;
  long failures = 0;
  while (static_cast<int>(tris.size()) < n) {
    if (failures >= kMaxConsecutiveFailures) {
      throw GenerationFailure("rejection sampling failed " + std::to_string(failures) + " times in a row");
    }
    const Vec3 center = (kOuterRadius - 0.75) * std::cbrt(unit(rng)) * unit_vector(rng);
    Triangle3 t;
    for (auto& v : t.v) v = center + (0.3 + 0.4 * unit(rng)) * unit_vector(rng);
    bool ok = t.area() > 0.02 && point_triangle_distance(Vec3::Zero(), t) > kClearance;
    for (const Vec3& v : t.v) ok = ok && v.norm() < kOuterRadius - kClearance;
    if (ok && planted != Planted::kNone) {
      ok = segment_triangle_distance(ins, t) > kClearance;
      if (ok && planted == Planted::kArticulated) ok = !sector_triangle_intersect(sec, t, kClearance);
    }
    for (std::size_t i = 0; ok && i < tris.size(); ++i) ok = triangle_distance(t, tris[i]) > kSeparation;
    if (!ok) {
      ++failures;
      continue;
    }
    failures = 0;
    tris.push_back(t);
  }
  out.scene = Scene(r, kOuterRadius, Vec3::Zero(), std::move(tris));
  validate_scene(out.scene);
  if (planted != Planted::kNone) {
    out.has_planted = true;
    out.planted_b = plant.b;
    out.planted_d = plant.d;
    out.planted_rho = plant.rho;
  }
  return out;
}

}  // namespace probe
