#include "pushgrasp/picking.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace pushgrasp {

namespace {

// Consecutive failures on an unchanged state before the top group is skipped.
constexpr int kLivelockFailures = 3;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t fingerprint(const SceneState& s) {
  std::uint64_t h = s.size();
  for (const auto& o : s.objects) {
    h = mix(h, static_cast<std::uint64_t>(o.id));
    for (double v : {o.pose.x, o.pose.y, o.pose.theta}) h = mix(h, static_cast<std::uint64_t>(std::llround(v * 1e7)));
  }
  return h;
}

}  // namespace

void PickingPolicy::validate() const {
  if (!(time_limit > 0) || attempt_limit <= 0) throw Error(Errc::InvalidInput, "picking limits must be positive");
}

double PickingReport::success_rate() const {
  return grasp_attempts == 0 ? 0.0 : 100.0 * successful_attempts / grasp_attempts;
}

double PickingReport::percent_picked() const {
  return objects_total == 0 ? 0.0 : 100.0 * objects_picked / objects_total;
}

std::vector<ObjectGroup> create_obj_groups(const SceneState& state, const Gripper& gripper) {
  const double radius = gripper.max_opening / 2;
  std::vector<Point2> centers;
  for (const auto& o : state.objects) centers.push_back(o.world_centroid());

  std::vector<ObjectGroup> multi;
  for (std::size_t i = 0; i < state.size(); ++i) {
    std::vector<ObjectId> ids;
    for (std::size_t j = 0; j < state.size(); ++j) {
      if ((centers[j] - centers[i]).norm() <= radius) ids.push_back(state.objects[j].id);
    }
    ObjectGroup g(std::move(ids));
    if (g.size() >= 2 && std::find(multi.begin(), multi.end(), g) == multi.end()) multi.push_back(std::move(g));
  }
  std::vector<ObjectGroup> out;
  for (const auto& g : multi) {
    const bool dominated = std::any_of(multi.begin(), multi.end(), [&](const ObjectGroup& other) {
      return other.size() > g.size() && g.is_subset_of(other);
    });
    if (!dominated) out.push_back(g);
  }
  for (const auto& o : state.objects) out.push_back(ObjectGroup({o.id}));
  return out;
}

std::vector<ObjectGroup> rank_obj_groups(std::vector<ObjectGroup> groups) {
  std::sort(groups.begin(), groups.end(), [](const ObjectGroup& a, const ObjectGroup& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.member_ids < b.member_ids;
  });
  return groups;
}

PickingReport run_picking(const Scene& scene, const PickingPolicy& policy, const PlannerConfig& planner_config,
                          const Gripper& gripper, const SimParams& sim_params, std::uint64_t rng_seed) {
  policy.validate();
  planner_config.validate();
  PickingReport report;
  report.objects_total = static_cast<int>(scene.size());
  SceneState state = scene;
  std::mt19937_64 rng(rng_seed);

  std::uint64_t last_fp = 0;
  int fails_on_state = 0;
  while (!state.empty()) {
    if (report.grasp_attempts >= policy.attempt_limit) break;
    if (report.planning_time >= policy.time_limit) {
      report.time_limited = true;
      break;
    }

    std::vector<ObjectGroup> groups;
    if (policy.mode == PickingMode::MultiObject) {
      groups = rank_obj_groups(create_obj_groups(state, gripper));
    } else {
      for (const auto& o : state.objects) groups.push_back(ObjectGroup({o.id}));
      std::shuffle(groups.begin(), groups.end(), rng);
    }
    const std::uint64_t fp = fingerprint(state);
    if (fp != last_fp) fails_on_state = 0;
    if (fails_on_state >= kLivelockFailures && !groups.empty()) groups.erase(groups.begin());

    bool executed = false;
    for (const auto& group : groups) {
      PlannerConfig cfg = planner_config;
      cfg.rng_seed = planner_config.rng_seed ^ (static_cast<std::uint64_t>(report.grasp_attempts) << 32);
      const PlanResult plan = plan_grasp(state, group, gripper, cfg, sim_params);
      report.planning_time += plan.planning_time;
      if (!plan.grasp) {
        if (report.planning_time >= policy.time_limit) break;
        continue;
      }

      AttemptRecord rec;
      rec.group = group;
      rec.grasp = *plan.grasp;
      rec.plan_time = plan.planning_time;
      rec.tested_in_sim = plan.tested_in_sim;
      SqueezeOutcome outcome;
      try {
        outcome = simulate_squeeze(state, group, *plan.grasp, gripper, sim_params);
      } catch (const Error&) {
        outcome.final_state = state;
      }
      ++report.grasp_attempts;
      ++report.actions_used;
      rec.success = !outcome.grasped.empty();
      rec.picked = outcome.grasped;
      state = outcome.final_state;
      if (rec.success) {
        ++report.successful_attempts;
        for (ObjectId id : outcome.grasped) state.erase(id);
        report.objects_picked += static_cast<int>(outcome.grasped.size());
        fails_on_state = 0;
      } else {
        fails_on_state = fp == last_fp ? fails_on_state + 1 : 1;
      }
      last_fp = fp;
      report.attempts.push_back(std::move(rec));
      executed = true;
      break;
    }
    if (!executed) break;
  }
  report.cleared = state.empty();
  return report;
}

}  // namespace pushgrasp
