#pragma once

// File formats: JSON for configuration, shape libraries, scenes, plans and
// picking reports; JSON lines for squeeze traces. Every writer is
// deterministic for identical input.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pushgrasp/grasping.hpp"
#include "pushgrasp/picking.hpp"
#include "pushgrasp/planner.hpp"
#include "pushgrasp/scene.hpp"
#include "pushgrasp/scenes.hpp"
#include "pushgrasp/squeeze_sim.hpp"

namespace pushgrasp {

struct Config {
  Gripper gripper;
  SimParams sim;
  PlannerConfig planner;
  PickingPolicy picking;
};

/// Overrides `base` with the keys present in a JSON config:
///   {"gripper": {"w_max", "jaw_length", "jaw_thickness", "f_g"},
///    "sim": {"jaw_step", "penetration_tol", "max_projection_iters", "angle_tol", "escape_margin"},
///    "planner": {"n_positions", "n_orientations", "strategy", "seed"},
///    "picking": {"time_limit", "attempt_limit"}}
/// A bare gripper object {"w_max", ...} is also accepted. Unknown keys are
/// rejected with InvalidInput.
Config parse_config(const std::string& text, Config base = {});
Config load_config(const std::string& path, Config base = {});
std::string config_to_json(const Config& config);

std::string gripper_to_json(const Gripper& gripper);

std::string shape_library_to_json(const ShapeLibrary& shapes, std::uint64_t seed);
ShapeLibrary parse_shape_library(const std::string& text);

/// A generated scene with its provenance in the experiment grid.
struct LabeledScene {
  int grasp_class = 0;  // number of objects in the target group, 0 for clutter
  int index = 0;
  std::uint64_t seed = 0;
  Scene scene;
};

/// Single scene: a JSON list of {"id", "vertices" (local frame), "pose": [x, y, theta]}.
std::string scene_to_json(const Scene& scene);
Scene parse_scene(const std::string& text);

/// Scene collection: {"scenes": [{"class", "index", "seed", "objects": [...]}]}.
/// parse_scene_set also accepts a single-scene file.
std::string scene_set_to_json(const std::vector<LabeledScene>& scenes);
std::vector<LabeledScene> parse_scene_set(const std::string& text);

std::string plan_result_to_json(const PlanResult& result, const ObjectGroup& group, Strategy strategy);

/// The grasp stored in a PlanResult JSON, if one was found.
std::optional<Grasp> parse_plan_grasp(const std::string& text);

std::string picking_report_to_json(const PickingReport& report);

/// One JSON object per frame: {"step", "opening", "poses", "contacts"}.
void write_trace_jsonl(std::ostream& out, const SqueezeTrace& trace);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pushgrasp
