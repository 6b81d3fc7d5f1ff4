#include "probe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "probe/parallel.hpp"

namespace probe {

namespace {

constexpr double kNudge = 1e-7;  // step off a critical angle
constexpr int kThetaGrid = 96;

double wrap2pi(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

// Clockwise angle from bt to u (the rotation carrying u onto bt).
double rotation_to(const Vec2& bt, const Vec2& u) { return std::atan2(cross2(u, bt), u.dot(bt)); }

bool insertion_clear_2d(const std::vector<Segment2>& segs, const Segment2& ins) {
  for (const auto& s : segs) {
    if (segment_segment_distance(s, ins) <= 1e-9) return false;
  }
  return true;
}

struct PlaneSearch {
  const Scene& scene;
  const Plane3& plane;
  long budget;
  long verified = 0;
  PlaneFrame frame;

  bool exhausted() const { return verified >= budget; }

  std::optional<Trajectory> try_one(const Vec2& b, const Vec2& d) {
    if (exhausted()) return std::nullopt;
    ++verified;
    const Trajectory t = make_trajectory(frame.to_world(b), frame.to_world(d));
    if (t.rho > kHalfPi) return std::nullopt;
    if (verify_trajectory(scene, t).feasible) return t;
    return std::nullopt;
  }

  std::optional<Trajectory> run_sense(Sense sense, const std::vector<Segment2>& segs) {
    const double r = scene.r();
    const double big_r = scene.big_r();
    const PlanarInstance inst = build_planar_instance(r, segs, sense);
    const Envelope env = build_envelopes(inst);
    std::vector<Segment2> canon;
    for (const auto& s : segs) canon.push_back({inst.to_canonical(s.u), inst.to_canonical(s.v)});

    std::vector<double> critical;
    for (const auto& a : env.arcs) critical.insert(critical.end(), {a.lo, a.hi});
    for (const auto& f : env.forbidden) critical.insert(critical.end(), {f.lo, f.hi});
    for (const auto& s : canon) {
      for (const Vec2& p : {s.u, s.v}) {
        if (p.norm() > 0) critical.push_back(wrap2pi(std::atan2(p.y(), p.x())));
      }
    }
    std::vector<double> thetas;
    for (double c : critical) thetas.insert(thetas.end(), {wrap2pi(c - kNudge), wrap2pi(c + kNudge)});
    std::vector<double> marks = critical;
    for (int k = 0; k < kThetaGrid; ++k) marks.push_back(2 * kPi * k / kThetaGrid);
    std::sort(marks.begin(), marks.end());
    for (std::size_t k = 0; k < marks.size(); ++k) {
      const double next = k + 1 < marks.size() ? marks[k + 1] : marks[0] + 2 * kPi;
      if (next - marks[k] > 2 * kNudge) thetas.push_back(wrap2pi(0.5 * (marks[k] + next)));
    }

    for (double th : thetas) {
      if (exhausted()) return std::nullopt;
      if (env.is_forbidden(th)) continue;
      const auto f = env.value(th);
      const double rho_s = f ? 2.0 * std::asin(std::min(1.0, *f)) : kHalfPi + 2 * kNudge;
      const double rho_max = std::min(kHalfPi, rho_s - kNudge);
      if (rho_max < 0.0) continue;
      const Vec2 b(r * std::cos(th), r * std::sin(th));
      const Vec2 bt = -b / r;
      std::vector<double> rhos = {0.0, rho_max};
      for (const auto& s : canon) {
        for (const Vec2& p : {s.u, s.v}) {
          const Vec2 w = p - b;
          if (w.norm() < 1e-12) continue;
          for (const Vec2& u : {Vec2(w / w.norm()), Vec2(-w / w.norm())}) {
            const double rho = rotation_to(bt, u);
            if (rho > 0.0 && rho < rho_max) rhos.push_back(rho);
          }
        }
      }
      std::sort(rhos.begin(), rhos.end());
      // The direction collinear with bt first, then one per free interval.
      std::vector<double> picks = {0.0};
      for (std::size_t k = 0; k + 1 < rhos.size(); ++k) picks.push_back(0.5 * (rhos[k] + rhos[k + 1]));
      for (double rho : picks) {
        const Vec2 d = rotate2(bt, -rho);
        const double bd = b.dot(d);
        const double len = bd + std::sqrt(std::max(0.0, bd * bd + big_r * big_r - r * r));
        if (!insertion_clear_2d(canon, {b - len * d, b + r * d})) continue;
        if (auto t = try_one(inst.to_canonical(b), inst.to_canonical(d))) return t;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

PlaneStrategy parse_plane_strategy(const std::string& s) {
  if (s == "grid") return PlaneStrategy::kGrid;
  if (s == "sphere") return PlaneStrategy::kSphere;
  throw std::invalid_argument("unknown plane strategy: " + s);
}

void PlaneSampleConfig::validate() const {
  if (count < 1) throw std::invalid_argument("plane count must be at least 1");
  if (per_plane_budget < 0) throw std::invalid_argument("per-plane budget must be non-negative");
}

std::vector<Plane3> sample_planes(const PlaneSampleConfig& cfg) {
  cfg.validate();
  std::vector<Plane3> out;
  if (cfg.strategy == PlaneStrategy::kGrid) {
    const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.count)) - 1e-9));
    // Shearing the inclination by the node index keeps every I distinct, so
    // the I = 0 row does not collapse into one plane.
    for (int j = 0; j < k && static_cast<int>(out.size()) < cfg.count; ++j) {
      for (int i = 0; i < k && static_cast<int>(out.size()) < cfg.count; ++i) {
        const double inc = kPi * (i * k + j) / (static_cast<double>(k) * k);
        const double node = kPi * j / k;
        out.push_back(Plane3::from_angles({inc, node}));
      }
    }
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double phase = static_cast<double>(cfg.seed % 1000003) * 1e-3;
  for (int i = 0; i < cfg.count; ++i) {
    const double z = 1.0 - (i + 0.5) / cfg.count;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i + phase;
    out.push_back(Plane3{Vec3(rad * std::cos(phi), rad * std::sin(phi), z), 0.0});
  }
  return out;
}

std::optional<Trajectory> plan_in_plane(const Scene& scene, const Plane3& plane, long budget, InPlaneStats* stats) {
  PlaneSearch search{scene, plane, budget, 0, PlaneFrame::of(plane)};
  const auto segs = plane_sections(scene, plane);
  std::optional<Trajectory> out;
  for (Sense sense : {Sense::kCcw, Sense::kCw}) {
    out = search.run_sense(sense, segs);
    if (out) break;
  }
  if (stats) stats->verified += search.verified;
  return out;
}

SampledResult plan_sampled(const Scene& scene, const std::vector<Plane3>& planes, long per_plane_budget,
                           int threads) {
  SampledResult res;
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, threads)) * 4;
  for (std::size_t base = 0; base < planes.size() && !res.hit; base += chunk) {
    const std::size_t n = std::min(chunk, planes.size() - base);
    std::vector<std::optional<Trajectory>> found(n);
    std::vector<InPlaneStats> stats(n);
    parallel_for(n, threads, [&](std::size_t i) {
      found[i] = plan_in_plane(scene, planes[base + i], per_plane_budget, &stats[i]);
    });
    for (std::size_t i = 0; i < n; ++i) {
      ++res.planes_tried;
      res.verified += stats[i].verified;
      if (found[i]) {
        res.hit = PlaneHit{*found[i], planes[base + i].angles(), static_cast<int>(base + i)};
        break;
      }
    }
  }
  return res;
}

SampledResult plan_sampled(const Scene& scene, const PlaneSampleConfig& cfg) {
  return plan_sampled(scene, sample_planes(cfg), cfg.per_plane_budget, cfg.threads);
}

}  // namespace probe
