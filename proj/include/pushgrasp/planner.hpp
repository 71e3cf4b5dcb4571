#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pushgrasp/grasping.hpp"
#include "pushgrasp/scene.hpp"
#include "pushgrasp/squeeze_sim.hpp"

namespace pushgrasp {

enum class Strategy {
  GP,           // rank + filter + simulate
  RandPhys,     // shuffled, simulate only
  RankPhys,     // ranked, simulate only
  RandFilPhys,  // shuffled + filter + simulate
};

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct PlannerConfig {
  int n_positions = 70;
  int n_orientations = 7;
  Strategy strategy = Strategy::GP;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct GraspCandidate {
  Grasp grasp;
  int position_index = 0;
  int orientation_index = 0;
};

struct PlanResult {
  std::optional<Grasp> grasp;
  int tested_in_sim = 0;
  int filtered_out = 0;
  int candidates_total = 0;
  double planning_time = 0;  // seconds, wall clock
  long sim_iterations = 0;   // deterministic work measure
};

/// Position samples over the group's convex hull times orientations in
/// [0, pi); candidates whose open jaws overlap any object are dropped.
std::vector<GraspCandidate> gen_grasp_cands(const SceneState& scene, const ObjectGroup& group,
                                            const Gripper& gripper, const PlannerConfig& config);

/// Stable sort by descending total intersection area of the group with S.
/// Totals are compared on a 1e-12 m^2 grid so that rounding noise does not
/// override the sample-order tie-break.
std::vector<GraspCandidate> rank_grasp_cands(std::vector<GraspCandidate> cands, const SceneState& scene,
                                             const ObjectGroup& group, const Gripper& gripper);

/// Total intersection area A_T of the group with S at full opening.
double total_intersection_area(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                               const Gripper& gripper);

/// True when either open jaw overlaps any object in the scene.
bool jaws_collide(const SceneState& scene, const Grasp& grasp, const Gripper& gripper);

PlanResult plan_grasp(const SceneState& scene, const ObjectGroup& group, const Gripper& gripper,
                      const PlannerConfig& config, const SimParams& params = {});

/// Same search over an already generated candidate list.
PlanResult plan_over_candidates(const SceneState& scene, const ObjectGroup& group, const Gripper& gripper,
                                const PlannerConfig& config, const SimParams& params,
                                std::vector<GraspCandidate> cands);

}  // namespace pushgrasp
