#pragma once

// Simulation experiments over seeded scene grids: filter true-negative
// coverage against the squeeze simulator, planner strategy comparison, and
// table-clearing runs. Results are ordered by (class, scene index) whatever
// the number of worker threads.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pushgrasp/filters.hpp"
#include "pushgrasp/io.hpp"
#include "pushgrasp/picking.hpp"
#include "pushgrasp/planner.hpp"
#include "pushgrasp/scenes.hpp"
#include "pushgrasp/squeeze_sim.hpp"

namespace pushgrasp {

/// Scenes for classes `classes`, `per_class` each; scene s of class k uses
/// seed derive_seed(seed, k, s).
std::vector<LabeledScene> gen_scene_grid(const std::vector<int>& classes, int per_class, std::uint64_t seed,
                                         const ShapeLibrary& library, const Gripper& gripper);

/// 33-object table-clearing scenes.
std::vector<LabeledScene> gen_clutter_scenes(int count, std::uint64_t seed, const ShapeLibrary& library);

struct FilterEvalRow {
  int grasp_class = 0;
  int scene = 0;
  int candidate = 0;
  Grasp grasp;
  Rejection rejected_by = Rejection::None;
  double h_0 = 0;
  double h_f_min = 0;
  double min_area = 0;
  bool sim_success = false;
  bool sim_error = false;  // InitialPenetration / NonConvergent, counted as failure
  double final_opening = 0;
  long sim_iterations = 0;

  bool false_negative() const { return rejected_by != Rejection::None && sim_success; }
};

struct FilterClassSummary {
  int grasp_class = 0;
  int scenes = 0;
  long candidates = 0;
  long sim_successes = 0;
  long sim_failures = 0;
  long rejected_area_only = 0;
  long rejected_diameter_only = 0;
  long rejected_both = 0;
  long false_negatives = 0;

  long true_negatives() const { return rejected_area_only + rejected_diameter_only + rejected_both; }
  /// Fractions of simulator failures predicted by each condition.
  double coverage() const;
  double area_share() const;
  double diameter_share() const;
  double overlap_share() const;
};

struct FilterEvalReport {
  std::vector<FilterEvalRow> rows;
  std::vector<FilterClassSummary> classes;
  FilterClassSummary total;
};

/// Every collision-free candidate of every scene is checked by the filters
/// and simulated. The whole scene is the target group.
FilterEvalReport run_filter_eval(const std::vector<LabeledScene>& scenes, const Gripper& gripper,
                                 const SimParams& sim, const PlannerConfig& planner, int jobs = 0);

struct PlannerBenchRow {
  int grasp_class = 0;
  int scene = 0;
  Strategy strategy = Strategy::GP;
  PlanResult result;
};

struct MeanCi {
  double mean = 0;
  double half_width = 0;  // 95% confidence half-width of the mean
  long n = 0;
};

/// Mean with a normal-approximation 95% interval (1.96 standard errors).
MeanCi mean_ci(const std::vector<double>& values);

struct StrategySummary {
  Strategy strategy = Strategy::GP;
  long scenes = 0;
  long found = 0;
  MeanCi tested;
  MeanCi tested_when_found;
  MeanCi planning_time;
  MeanCi sim_iterations;
};

struct PlannerBenchReport {
  std::vector<PlannerBenchRow> rows;  // by scene, then by strategy order
  std::vector<StrategySummary> strategies;

  const StrategySummary* find(Strategy s) const;
};

PlannerBenchReport run_planner_bench(const std::vector<LabeledScene>& scenes, const std::vector<Strategy>& strategies,
                                     const Gripper& gripper, const SimParams& sim, const PlannerConfig& planner,
                                     int jobs = 0);

struct PickingBenchRow {
  int scene = 0;
  PickingMode mode = PickingMode::MultiObject;
  PickingReport report;
};

std::vector<PickingBenchRow> run_picking_bench(const std::vector<LabeledScene>& scenes, PickingMode mode,
                                               const PickingPolicy& policy, const Gripper& gripper,
                                               const SimParams& sim, const PlannerConfig& planner,
                                               std::uint64_t seed, int jobs = 0);

/// CSV writers. Wall-clock columns only appear in the timing variants.
std::string filter_eval_csv(const FilterEvalReport& report);
std::string filter_summary_csv(const FilterEvalReport& report);
std::string planner_bench_csv(const PlannerBenchReport& report);
std::string planner_summary_csv(const PlannerBenchReport& report);
std::string planner_timing_csv(const PlannerBenchReport& report);
std::string picking_bench_csv(const std::vector<PickingBenchRow>& rows);
std::string picking_timing_csv(const std::vector<PickingBenchRow>& rows);

struct RenderOptions {
  std::optional<Grasp> grasp;
  const SqueezeTrace* trace = nullptr;
  Gripper gripper;
};

/// SVG at 1 m = 1000 px: objects as filled polygons, jaws as black
/// rectangles, the internal region S outlined, trace frames as outlines.
std::string render_svg(const Scene& scene, const RenderOptions& options = {});

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads (0 = hardware).
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace pushgrasp
