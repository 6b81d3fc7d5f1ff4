#include <array>
#include <cmath>
#include <map>

#include "probe/events.hpp"
#include "probe/parallel.hpp"

namespace probe {

namespace {

struct EventOutcome {
  std::uint64_t candidates = 0;
  std::uint64_t touching = 0;
  std::vector<FoundTrajectory> found;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

EventOutcome process(const Scene& scene, const EventContext& ctx, const ExtremalEvent& ev, std::uint64_t index,
                     bool stop_at_first) {
  EventOutcome o;
  const double margin = 1e-9 * scene.r();
  const auto sols = solve_event(ctx, ev);
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const CandidateSolution& c = sols[k];
    ++o.candidates;
    if (!verify_touching(scene, c.trajectory, margin)) continue;
    ++o.touching;
    std::optional<Trajectory> w;
    if (verify_trajectory(scene, c.trajectory).feasible) {
      w = c.trajectory;
    } else {
      w = retract(scene, c.trajectory, mix(index * 64 + k));
    }
    if (!w) continue;
    o.found.push_back({index, ev, c, *w});
    if (stop_at_first) break;
  }
  return o;
}

using DedupKey = std::array<long long, 6>;

DedupKey key_of(const Trajectory& t) {
  DedupKey k;
  for (int i = 0; i < 3; ++i) {
    k[i] = std::llround(t.b[i] * 1e8);
    k[3 + i] = std::llround(t.d[i] * 1e8);
  }
  return k;
}

}  // namespace

PlanResult plan_exact(const Scene& scene, const PlanOptions& options) {
  const EventContext ctx = EventContext::of(scene);
  PlanResult result;
  std::vector<CaseId> order = {CaseId::kU1, CaseId::kU2};
  for (CaseId id : articulated_cases()) order.push_back(id);
  for (CaseId id : order) result.counts[id] = {};

  std::map<DedupKey, std::size_t> seen;
  std::vector<ExtremalEvent> batch;
  std::vector<EventOutcome> outcomes;
  std::uint64_t next_index = 0;
  bool done = false;

  auto flush = [&] {
    if (batch.empty()) return;
    const std::uint64_t base = next_index - batch.size();
    outcomes.assign(batch.size(), {});
    parallel_for(batch.size(), options.threads, [&](std::size_t i) {
      outcomes[i] = process(scene, ctx, batch[i], base + i, options.stop_at_first);
    });
    // Reduction in enumeration order keeps the result independent of threads.
    for (std::size_t i = 0; i < batch.size() && !done; ++i) {
      CaseCounts& cc = result.counts[batch[i].id];
      ++cc.enumerated;
      cc.candidates += outcomes[i].candidates;
      cc.touching += outcomes[i].touching;
      cc.feasible += outcomes[i].found.size();
      for (auto& f : outcomes[i].found) {
        if (!result.best) result.best = f;
        if (options.stop_at_first) {
          done = true;
          break;
        }
        const auto [it, fresh] = seen.emplace(key_of(f.extremal.trajectory), result.all.size());
        if (fresh) result.all.push_back(std::move(f));
      }
    }
    batch.clear();
  };

  for (CaseId id : order) {
    if (done) break;
    enumerate_case(ctx, id, [&](const ExtremalEvent& ev) {
      if (done) return;
      batch.push_back(ev);
      ++next_index;
      if (batch.size() >= std::max<std::size_t>(1, options.batch)) flush();
    });
    flush();
  }
  // Without obstacles no trajectory is isolated by supports; any ray works.
  if (!result.best && scene.size() == 0) {
    const Trajectory t = unarticulated(Vec3::UnitZ(), scene.r());
    ExtremalEvent ev;
    ev.id = CaseId::kU1;
    result.best = FoundTrajectory{0, ev, {t, 0.0, {}}, t};
    result.all.push_back(*result.best);
  }
  result.feasible = result.best.has_value();
  return result;
}

}  // namespace probe
