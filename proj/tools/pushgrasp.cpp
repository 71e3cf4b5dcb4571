// pushgrasp: scene generation, filter and planner experiments, table
// clearing, and rendering.
//
// Relative output paths are resolved against $PUSHGRASP_OUT_DIR when set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pushgrasp/bench.hpp"
#include "pushgrasp/io.hpp"

namespace fs = std::filesystem;
using namespace pushgrasp;

namespace {

constexpr const char* kOutDirEnv = "PUSHGRASP_OUT_DIR";

std::string out_path(const std::string& path) {
  fs::path p(path);
  const char* dir = std::getenv(kOutDirEnv);
  if (dir && *dir && p.is_relative()) p = fs::path(dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

void emit(const std::string& path, const std::string& content) {
  const std::string full = out_path(path);
  write_file(full, content);
  std::cerr << "wrote " << full << "\n";
}

ShapeLibrary load_library(const std::string& path) {
  if (path.empty()) return gen_object_set(0);
  return parse_shape_library(read_file(path));
}

std::vector<Strategy> parse_strategies(const std::string& list) {
  std::vector<Strategy> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_strategy(item));
  }
  if (out.empty()) throw Error(Errc::InvalidInput, "no strategies given");
  return out;
}

Grasp parse_grasp(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) throw Error(Errc::InvalidInput, "grasp must be x,y,theta");
  return Grasp{Pose2d(v[0], v[1], v[2])};
}

Grasp grasp_from_plan(const std::string& path) {
  const auto grasp = parse_plan_grasp(read_file(path));
  if (!grasp) throw Error(Errc::InvalidInput, "plan file has no grasp");
  return *grasp;
}

const LabeledScene& pick_scene(const std::vector<LabeledScene>& scenes, int index) {
  if (index < 0 || index >= static_cast<int>(scenes.size())) {
    throw Error(Errc::InvalidInput, "scene index out of range");
  }
  return scenes[static_cast<std::size_t>(index)];
}

void print_filter_summary(const FilterEvalReport& r) {
  const auto& t = r.total;
  std::cout << "candidates " << t.candidates << ", simulator failures " << t.sim_failures << ", false negatives "
            << t.false_negatives << "\n";
  std::cout << "coverage " << format_double(t.coverage()) << " (area " << format_double(t.area_share())
            << ", diameter " << format_double(t.diameter_share()) << ", overlap " << format_double(t.overlap_share())
            << ")\n";
}

void print_planner_summary(const PlannerBenchReport& r) {
  for (const auto& s : r.strategies) {
    std::cout << strategy_name(s.strategy) << ": found " << s.found << "/" << s.scenes << ", tested "
              << format_double(s.tested.mean) << " +- " << format_double(s.tested.half_width)
              << ", tested when found " << format_double(s.tested_when_found.mean) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-object push-grasp planning and simulation"};
  app.require_subcommand(1);
  std::string config_path;
  int jobs = 0;
  app.add_option("--config", config_path, "JSON config overriding gripper, sim, planner and picking settings")
      ->check(CLI::ExistingFile);
  app.add_option("--jobs", jobs, "Worker threads for scene-level parallelism (0 = all cores)");

  std::uint64_t seed = 0;
  std::string out, objects_path, scenes_path, summary_path, timing_path;

  auto* gen_objects = app.add_subcommand("gen-objects", "Write the seeded 33-shape object library");
  gen_objects->add_option("--seed", seed, "Library seed");
  gen_objects->add_option("--out", out, "Output JSON")->default_val("objects.json");

  std::vector<int> classes;
  int count = 20;
  bool clutter = false;
  auto* gen_scenes = app.add_subcommand("gen-scenes", "Write seeded scenes for grasp classes");
  gen_scenes->add_option("--class", classes, "Objects per scene (one or more classes)");
  gen_scenes->add_flag("--clutter", clutter, "33-object table-clearing scenes instead of grasp classes");
  gen_scenes->add_option("--count", count, "Scenes per class")->check(CLI::PositiveNumber);
  gen_scenes->add_option("--seed", seed, "Scene seed");
  gen_scenes->add_option("--objects", objects_path, "Shape library JSON (default: library for seed 0)");
  gen_scenes->add_option("--out", out, "Output JSON")->default_val("scenes.json");

  auto* filter_eval = app.add_subcommand("filter-eval", "Filter verdicts against the squeeze simulator");
  filter_eval->add_option("--scenes", scenes_path, "Scene set JSON")->required()->check(CLI::ExistingFile);
  filter_eval->add_option("--out", out, "Per-candidate CSV")->default_val("filter_eval.csv");
  filter_eval->add_option("--summary", summary_path, "Per-class summary CSV");

  std::string strategies = "gp,rand-phys,rank-phys,rand-fil-phys";
  auto* planner_bench = app.add_subcommand("planner-bench", "Compare planning strategies on a scene set");
  planner_bench->add_option("--scenes", scenes_path, "Scene set JSON")->required()->check(CLI::ExistingFile);
  planner_bench->add_option("--strategies", strategies, "Comma-separated strategies");
  planner_bench->add_option("--out", out, "Per-scene CSV")->default_val("planner_bench.csv");
  planner_bench->add_option("--summary", summary_path, "Per-strategy summary CSV");
  planner_bench->add_option("--timing", timing_path, "Wall-clock timing CSV");

  std::string policy = "multi", json_path;
  auto* pick = app.add_subcommand("pick", "Clear each scene with the picking loop");
  pick->add_option("--policy", policy, "Grouping policy")->check(CLI::IsMember({"single", "multi"}));
  pick->add_option("--scenes", scenes_path, "Scene set JSON")->required()->check(CLI::ExistingFile);
  pick->add_option("--seed", seed, "Picking seed");
  pick->add_option("--out", out, "Per-scene CSV")->default_val("picking.csv");
  pick->add_option("--json", json_path, "Per-attempt report JSON (one file, all scenes)");
  pick->add_option("--timing", timing_path, "Wall-clock timing CSV");

  int index = 0;
  std::vector<int> group_ids;
  std::string trace_path;
  auto* plan = app.add_subcommand("plan", "Plan one grasp for a group in one scene");
  plan->add_option("--scene", scenes_path, "Scene or scene set JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--index", index, "Scene index within a scene set");
  plan->add_option("--group", group_ids, "Object ids of the group (default: whole scene)");
  plan->add_option("--out", out, "PlanResult JSON")->default_val("plan.json");
  plan->add_option("--trace", trace_path, "Squeeze trace JSONL of the returned grasp");

  std::string grasp_text, plan_path;
  bool squeeze = false;
  auto* render = app.add_subcommand("render", "Render a scene and optional grasp to SVG");
  render->add_option("--scene", scenes_path, "Scene or scene set JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--index", index, "Scene index within a scene set");
  render->add_option("--grasp", grasp_text, "Grasp pose x,y,theta");
  render->add_option("--plan", plan_path, "Take the grasp from a PlanResult JSON")->check(CLI::ExistingFile);
  render->add_flag("--squeeze", squeeze, "Simulate the grasp on the whole scene and draw the trace");
  render->add_option("--out", out, "Output SVG")->default_val("scene.svg");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.gripper.validate();
    cfg.sim.validate(cfg.gripper);

    if (*gen_objects) {
      emit(out, shape_library_to_json(gen_object_set(seed), seed));
    } else if (*gen_scenes) {
      const ShapeLibrary lib = load_library(objects_path);
      std::vector<LabeledScene> scenes;
      if (clutter) {
        scenes = gen_clutter_scenes(count, seed, lib);
      } else {
        if (classes.empty()) throw Error(Errc::InvalidInput, "--class or --clutter required");
        scenes = gen_scene_grid(classes, count, seed, lib, cfg.gripper);
      }
      emit(out, scene_set_to_json(scenes));
    } else if (*filter_eval) {
      const auto scenes = parse_scene_set(read_file(scenes_path));
      const auto report = run_filter_eval(scenes, cfg.gripper, cfg.sim, cfg.planner, jobs);
      emit(out, filter_eval_csv(report));
      if (!summary_path.empty()) emit(summary_path, filter_summary_csv(report));
      print_filter_summary(report);
    } else if (*planner_bench) {
      const auto scenes = parse_scene_set(read_file(scenes_path));
      const auto report =
          run_planner_bench(scenes, parse_strategies(strategies), cfg.gripper, cfg.sim, cfg.planner, jobs);
      emit(out, planner_bench_csv(report));
      if (!summary_path.empty()) emit(summary_path, planner_summary_csv(report));
      if (!timing_path.empty()) emit(timing_path, planner_timing_csv(report));
      print_planner_summary(report);
    } else if (*pick) {
      const auto scenes = parse_scene_set(read_file(scenes_path));
      const PickingMode mode = policy == "single" ? PickingMode::SingleObject : PickingMode::MultiObject;
      const auto rows = run_picking_bench(scenes, mode, cfg.picking, cfg.gripper, cfg.sim, cfg.planner, seed, jobs);
      emit(out, picking_bench_csv(rows));
      if (!json_path.empty()) {
        std::string json = "[\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
          json += picking_report_to_json(rows[i].report);
          if (i + 1 < rows.size()) json += ",\n";
        }
        emit(json_path, json + "]\n");
      }
      if (!timing_path.empty()) emit(timing_path, picking_timing_csv(rows));
    } else if (*plan) {
      const auto scenes = parse_scene_set(read_file(scenes_path));
      const Scene& scene = pick_scene(scenes, index).scene;
      const ObjectGroup group = group_ids.empty() ? whole_scene_group(scene) : ObjectGroup(group_ids);
      for (ObjectId id : group.member_ids) scene.at(id);
      const PlanResult result = plan_grasp(scene, group, cfg.gripper, cfg.planner, cfg.sim);
      emit(out, plan_result_to_json(result, group, cfg.planner.strategy));
      if (!trace_path.empty() && result.grasp) {
        SqueezeTrace trace;
        simulate_squeeze(scene, group, *result.grasp, cfg.gripper, cfg.sim, &trace);
        std::ostringstream jsonl;
        write_trace_jsonl(jsonl, trace);
        emit(trace_path, jsonl.str());
      }
      std::cout << (result.grasp ? "grasp found" : "no grasp") << ", tested " << result.tested_in_sim
                << ", filtered " << result.filtered_out << " of " << result.candidates_total << "\n";
    } else if (*render) {
      const auto scenes = parse_scene_set(read_file(scenes_path));
      const Scene& scene = pick_scene(scenes, index).scene;
      RenderOptions opts;
      opts.gripper = cfg.gripper;
      if (!grasp_text.empty()) opts.grasp = parse_grasp(grasp_text);
      if (!plan_path.empty()) opts.grasp = grasp_from_plan(plan_path);
      SqueezeTrace trace;
      if (squeeze) {
        if (!opts.grasp) throw Error(Errc::InvalidInput, "--squeeze needs --grasp or --plan");
        simulate_squeeze(scene, whole_scene_group(scene), *opts.grasp, cfg.gripper, cfg.sim, &trace);
        opts.trace = &trace;
      }
      emit(out, render_svg(scene, opts));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
