#include "pushgrasp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace pushgrasp {

namespace {

std::string fmt(double v) { return format_double(v); }

FilterClassSummary& summary_for(std::vector<FilterClassSummary>& list, int k) {
  for (auto& s : list) {
    if (s.grasp_class == k) return s;
  }
  list.push_back(FilterClassSummary{});
  list.back().grasp_class = k;
  return list.back();
}

void accumulate(FilterClassSummary& s, const FilterEvalRow& r) {
  ++s.candidates;
  if (r.sim_success) {
    ++s.sim_successes;
    if (r.false_negative()) ++s.false_negatives;
    return;
  }
  ++s.sim_failures;
  switch (r.rejected_by) {
    case Rejection::IntersectionArea: ++s.rejected_area_only; break;
    case Rejection::Diameter: ++s.rejected_diameter_only; break;
    case Rejection::Both: ++s.rejected_both; break;
    case Rejection::None: break;
  }
}

double ratio(long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

std::uint64_t planner_seed(const PlannerConfig& planner, const LabeledScene& s) {
  return derive_seed(planner.rng_seed, static_cast<std::uint64_t>(s.grasp_class), static_cast<std::uint64_t>(s.index));
}

}  // namespace

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<LabeledScene> gen_scene_grid(const std::vector<int>& classes, int per_class, std::uint64_t seed,
                                         const ShapeLibrary& library, const Gripper& gripper) {
  std::vector<LabeledScene> out;
  for (int k : classes) {
    for (int s = 0; s < per_class; ++s) {
      SceneSpec spec;
      spec.n_objects = k;
      spec.object_set = library;
      spec.rng_seed = derive_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s));
      out.push_back(LabeledScene{k, s, spec.rng_seed, gen_scene(spec, gripper)});
    }
  }
  return out;
}

std::vector<LabeledScene> gen_clutter_scenes(int count, std::uint64_t seed, const ShapeLibrary& library) {
  std::vector<LabeledScene> out;
  for (int s = 0; s < count; ++s) {
    ClutterSpec spec;
    spec.object_set = library;
    spec.rng_seed = derive_seed(seed, 0, static_cast<std::uint64_t>(s));
    out.push_back(LabeledScene{0, s, spec.rng_seed, gen_cluttered_scene(spec)});
  }
  return out;
}

double FilterClassSummary::coverage() const { return ratio(true_negatives(), sim_failures); }
double FilterClassSummary::area_share() const { return ratio(rejected_area_only + rejected_both, sim_failures); }
double FilterClassSummary::diameter_share() const {
  return ratio(rejected_diameter_only + rejected_both, sim_failures);
}
double FilterClassSummary::overlap_share() const { return ratio(rejected_both, sim_failures); }

FilterEvalReport run_filter_eval(const std::vector<LabeledScene>& scenes, const Gripper& gripper,
                                 const SimParams& sim, const PlannerConfig& planner, int jobs) {
  gripper.validate();
  sim.validate(gripper);
  planner.validate();
  std::vector<std::vector<FilterEvalRow>> per_scene(scenes.size());
  parallel_for(static_cast<int>(scenes.size()), jobs, [&](int i) {
    const LabeledScene& ls = scenes[static_cast<std::size_t>(i)];
    const ObjectGroup group = whole_scene_group(ls.scene);
    PlannerConfig cfg = planner;
    cfg.rng_seed = planner_seed(planner, ls);
    const auto cands = gen_grasp_cands(ls.scene, group, gripper, cfg);
    const auto polys = group_polygons(ls.scene, group);
    const auto d_f = final_diameters(ls.scene, group);
    auto& rows = per_scene[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < cands.size(); ++c) {
      FilterEvalRow row;
      row.grasp_class = ls.grasp_class;
      row.scene = ls.index;
      row.candidate = static_cast<int>(c);
      row.grasp = cands[c].grasp;
      const FilterVerdict v = grasp_failure(polys, d_f, row.grasp, gripper);
      row.rejected_by = v.rejected_by;
      row.h_0 = v.h_0;
      row.h_f_min = v.h_f_min;
      row.min_area = *std::min_element(v.areas.begin(), v.areas.end());
      try {
        const SqueezeOutcome o = simulate_squeeze(ls.scene, group, row.grasp, gripper, sim);
        row.sim_success = o.success;
        row.final_opening = o.final_opening;
        row.sim_iterations = o.projection_iterations;
      } catch (const Error& e) {
        if (e.code() != Errc::InitialPenetration && e.code() != Errc::NonConvergent) throw;
        row.sim_error = true;
      }
      rows.push_back(row);
    }
  });

  FilterEvalReport report;
  for (auto& rows : per_scene) {
    if (!rows.empty()) ++summary_for(report.classes, rows.front().grasp_class).scenes;
    for (auto& r : rows) {
      accumulate(summary_for(report.classes, r.grasp_class), r);
      accumulate(report.total, r);
      report.rows.push_back(std::move(r));
    }
  }
  report.total.scenes = static_cast<int>(scenes.size());
  std::stable_sort(report.classes.begin(), report.classes.end(),
                   [](const auto& a, const auto& b) { return a.grasp_class < b.grasp_class; });
  return report;
}

MeanCi mean_ci(const std::vector<double>& values) {
  MeanCi r;
  r.n = static_cast<long>(values.size());
  if (values.empty()) return r;
  double sum = 0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(r.n);
  if (r.n < 2) return r;
  double ss = 0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(r.n - 1));
  r.half_width = 1.96 * sd / std::sqrt(static_cast<double>(r.n));
  return r;
}

const StrategySummary* PlannerBenchReport::find(Strategy s) const {
  for (const auto& x : strategies) {
    if (x.strategy == s) return &x;
  }
  return nullptr;
}

PlannerBenchReport run_planner_bench(const std::vector<LabeledScene>& scenes, const std::vector<Strategy>& strategies,
                                     const Gripper& gripper, const SimParams& sim, const PlannerConfig& planner,
                                     int jobs) {
  gripper.validate();
  sim.validate(gripper);
  planner.validate();
  const std::size_t ns = strategies.size();
  std::vector<PlannerBenchRow> rows(scenes.size() * ns);
  parallel_for(static_cast<int>(scenes.size()), jobs, [&](int i) {
    const LabeledScene& ls = scenes[static_cast<std::size_t>(i)];
    const ObjectGroup group = whole_scene_group(ls.scene);
    PlannerConfig cfg = planner;
    cfg.rng_seed = planner_seed(planner, ls);
    // Every strategy sees the identical candidate set.
    const auto t0 = std::chrono::steady_clock::now();
    const auto cands = gen_grasp_cands(ls.scene, group, gripper, cfg);
    const double gen_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t s = 0; s < ns; ++s) {
      cfg.strategy = strategies[s];
      PlannerBenchRow& row = rows[static_cast<std::size_t>(i) * ns + s];
      row.grasp_class = ls.grasp_class;
      row.scene = ls.index;
      row.strategy = strategies[s];
      row.result = plan_over_candidates(ls.scene, group, gripper, cfg, sim, cands);
      row.result.planning_time += gen_time;
    }
  });

  PlannerBenchReport report;
  report.rows = std::move(rows);
  for (Strategy st : strategies) {
    StrategySummary sum;
    sum.strategy = st;
    std::vector<double> tested, tested_found, time, iters;
    for (const auto& r : report.rows) {
      if (r.strategy != st) continue;
      ++sum.scenes;
      tested.push_back(r.result.tested_in_sim);
      time.push_back(r.result.planning_time);
      iters.push_back(static_cast<double>(r.result.sim_iterations));
      if (r.result.grasp) {
        ++sum.found;
        tested_found.push_back(r.result.tested_in_sim);
      }
    }
    sum.tested = mean_ci(tested);
    sum.tested_when_found = mean_ci(tested_found);
    sum.planning_time = mean_ci(time);
    sum.sim_iterations = mean_ci(iters);
    report.strategies.push_back(sum);
  }
  return report;
}

std::vector<PickingBenchRow> run_picking_bench(const std::vector<LabeledScene>& scenes, PickingMode mode,
                                               const PickingPolicy& policy, const Gripper& gripper,
                                               const SimParams& sim, const PlannerConfig& planner,
                                               std::uint64_t seed, int jobs) {
  std::vector<PickingBenchRow> rows(scenes.size());
  PickingPolicy p = policy;
  p.mode = mode;
  parallel_for(static_cast<int>(scenes.size()), jobs, [&](int i) {
    const LabeledScene& ls = scenes[static_cast<std::size_t>(i)];
    PlannerConfig cfg = planner;
    cfg.strategy = Strategy::GP;
    cfg.rng_seed = planner_seed(planner, ls);
    rows[static_cast<std::size_t>(i)] = PickingBenchRow{
        ls.index, mode,
        run_picking(ls.scene, p, cfg, gripper, sim, derive_seed(seed, static_cast<std::uint64_t>(ls.index), 1))};
  });
  return rows;
}

std::string filter_eval_csv(const FilterEvalReport& report) {
  std::ostringstream out;
  out << "class,scene,candidate,x,y,theta,rejected_by,h_0,h_f_min,min_area,sim_success,sim_error,final_opening,"
         "sim_iterations,false_negative\n";
  for (const auto& r : report.rows) {
    out << r.grasp_class << ',' << r.scene << ',' << r.candidate << ',' << fmt(r.grasp.pose.x) << ','
        << fmt(r.grasp.pose.y) << ',' << fmt(r.grasp.pose.theta) << ',' << rejection_name(r.rejected_by) << ','
        << fmt(r.h_0) << ',' << fmt(r.h_f_min) << ',' << fmt(r.min_area) << ',' << int(r.sim_success) << ','
        << int(r.sim_error) << ',' << fmt(r.final_opening) << ',' << r.sim_iterations << ','
        << int(r.false_negative()) << '\n';
  }
  return out.str();
}

std::string filter_summary_csv(const FilterEvalReport& report) {
  std::ostringstream out;
  out << "class,scenes,candidates,sim_successes,sim_failures,area_only,diameter_only,both,false_negatives,coverage,"
         "area_share,diameter_share,overlap_share\n";
  auto line = [&](const std::string& label, const FilterClassSummary& s) {
    out << label << ',' << s.scenes << ',' << s.candidates << ',' << s.sim_successes << ',' << s.sim_failures << ','
        << s.rejected_area_only << ',' << s.rejected_diameter_only << ',' << s.rejected_both << ','
        << s.false_negatives << ',' << fmt(s.coverage()) << ',' << fmt(s.area_share()) << ','
        << fmt(s.diameter_share()) << ',' << fmt(s.overlap_share()) << '\n';
  };
  for (const auto& s : report.classes) line(std::to_string(s.grasp_class), s);
  line("all", report.total);
  return out.str();
}

std::string planner_bench_csv(const PlannerBenchReport& report) {
  std::ostringstream out;
  out << "class,scene,strategy,found,x,y,theta,tested_in_sim,filtered_out,candidates_total,sim_iterations\n";
  for (const auto& r : report.rows) {
    const auto& g = r.result.grasp;
    out << r.grasp_class << ',' << r.scene << ',' << strategy_name(r.strategy) << ',' << int(g.has_value()) << ','
        << (g ? fmt(g->pose.x) : "") << ',' << (g ? fmt(g->pose.y) : "") << ',' << (g ? fmt(g->pose.theta) : "")
        << ',' << r.result.tested_in_sim << ',' << r.result.filtered_out << ',' << r.result.candidates_total << ','
        << r.result.sim_iterations << '\n';
  }
  return out.str();
}

std::string planner_summary_csv(const PlannerBenchReport& report) {
  std::ostringstream out;
  out << "strategy,scenes,found,tested_mean,tested_ci95,tested_when_found_mean,tested_when_found_ci95,"
         "sim_iterations_mean,sim_iterations_ci95\n";
  for (const auto& s : report.strategies) {
    out << strategy_name(s.strategy) << ',' << s.scenes << ',' << s.found << ',' << fmt(s.tested.mean) << ','
        << fmt(s.tested.half_width) << ',' << fmt(s.tested_when_found.mean) << ','
        << fmt(s.tested_when_found.half_width) << ',' << fmt(s.sim_iterations.mean) << ','
        << fmt(s.sim_iterations.half_width) << '\n';
  }
  return out.str();
}

std::string planner_timing_csv(const PlannerBenchReport& report) {
  std::ostringstream out;
  out << "class,scene,strategy,planning_time_s\n";
  for (const auto& r : report.rows) {
    out << r.grasp_class << ',' << r.scene << ',' << strategy_name(r.strategy) << ','
        << fmt(r.result.planning_time) << '\n';
  }
  for (const auto& s : report.strategies) {
    out << "mean,," << strategy_name(s.strategy) << ',' << fmt(s.planning_time.mean) << '\n';
    out << "ci95,," << strategy_name(s.strategy) << ',' << fmt(s.planning_time.half_width) << '\n';
  }
  return out.str();
}

std::string picking_bench_csv(const std::vector<PickingBenchRow>& rows) {
  std::ostringstream out;
  out << "scene,policy,grasp_attempts,successful_attempts,objects_picked,objects_total,actions_used,success_rate,"
         "percent_picked,cleared,time_limited\n";
  for (const auto& r : rows) {
    const auto& p = r.report;
    out << r.scene << ',' << (r.mode == PickingMode::MultiObject ? "multi" : "single") << ',' << p.grasp_attempts
        << ',' << p.successful_attempts << ',' << p.objects_picked << ',' << p.objects_total << ',' << p.actions_used
        << ',' << fmt(p.success_rate()) << ',' << fmt(p.percent_picked()) << ',' << int(p.cleared) << ','
        << int(p.time_limited) << '\n';
  }
  return out.str();
}

std::string picking_timing_csv(const std::vector<PickingBenchRow>& rows) {
  std::ostringstream out;
  out << "scene,policy,planning_time_s\n";
  for (const auto& r : rows) {
    out << r.scene << ',' << (r.mode == PickingMode::MultiObject ? "multi" : "single") << ','
        << fmt(r.report.planning_time) << '\n';
  }
  return out.str();
}

}  // namespace pushgrasp
