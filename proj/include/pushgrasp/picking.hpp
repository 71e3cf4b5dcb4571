#pragma once

#include <cstdint>
#include <vector>

#include "pushgrasp/planner.hpp"
#include "pushgrasp/scene.hpp"
#include "pushgrasp/squeeze_sim.hpp"

namespace pushgrasp {

enum class PickingMode { MultiObject, SingleObject };

struct PickingPolicy {
  PickingMode mode = PickingMode::MultiObject;
  double time_limit = 300.0;  // seconds of planning wall clock
  int attempt_limit = 200;

  void validate() const;
};

struct AttemptRecord {
  ObjectGroup group;
  Grasp grasp;
  double plan_time = 0;
  int tested_in_sim = 0;
  bool success = false;
  std::vector<ObjectId> picked;
};

struct PickingReport {
  int grasp_attempts = 0;
  int successful_attempts = 0;
  int objects_picked = 0;
  int objects_total = 0;
  int actions_used = 0;
  double planning_time = 0;
  bool cleared = false;
  bool time_limited = false;
  std::vector<AttemptRecord> attempts;

  double success_rate() const;    // percent
  double percent_picked() const;  // percent
};

/// Groups of objects whose centroids lie within w_max/2 of some object's
/// centroid; duplicates and multi-object groups with a listed strict
/// superset are removed, singletons are always kept.
std::vector<ObjectGroup> create_obj_groups(const SceneState& state, const Gripper& gripper);

/// Descending size; ties in lexicographic member-id order.
std::vector<ObjectGroup> rank_obj_groups(std::vector<ObjectGroup> groups);

PickingReport run_picking(const Scene& scene, const PickingPolicy& policy, const PlannerConfig& planner_config,
                          const Gripper& gripper, const SimParams& sim_params, std::uint64_t rng_seed);

}  // namespace pushgrasp
