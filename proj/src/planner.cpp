#include "pushgrasp/planner.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "pushgrasp/filters.hpp"

namespace pushgrasp {

namespace {

// Objects closer than this to a jaw count as colliding.
constexpr double kCollisionTol = 1e-9;

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::GP: return "gp";
    case Strategy::RandPhys: return "rand-phys";
    case Strategy::RankPhys: return "rank-phys";
    case Strategy::RandFilPhys: return "rand-fil-phys";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::GP, Strategy::RandPhys, Strategy::RankPhys, Strategy::RandFilPhys}) {
    if (name == strategy_name(s)) return s;
  }
  throw Error(Errc::InvalidInput, "unknown strategy '" + name + "'");
}

void PlannerConfig::validate() const {
  if (n_positions < 1 || n_orientations < 1) throw Error(Errc::InvalidInput, "N_p and N_theta must be >= 1");
}

bool jaws_collide(const SceneState& scene, const Grasp& grasp, const Gripper& gripper) {
  const JawPair jaws = jaws_at(gripper, grasp, gripper.max_opening);
  const auto lb = bounds(jaws.left), rb = bounds(jaws.right);
  for (const auto& obj : scene.objects) {
    const Polygon w = obj.world();
    const auto box = bounds(w);
    if (box.overlaps(lb) && sat_separation(jaws.left, w) < -kCollisionTol) return true;
    if (box.overlaps(rb) && sat_separation(jaws.right, w) < -kCollisionTol) return true;
  }
  return false;
}

std::vector<GraspCandidate> gen_grasp_cands(const SceneState& scene, const ObjectGroup& group,
                                            const Gripper& gripper, const PlannerConfig& config) {
  config.validate();
  if (group.size() == 0) throw Error(Errc::InvalidInput, "empty group");
  std::vector<Point2> pts;
  for (const auto& poly : group_polygons(scene, group)) {
    for (const auto& v : poly.vertices()) pts.push_back(v);
  }
  const Polygon hull = convex_hull(pts);
  const auto box = bounds(hull);

  // Jittered grid over the hull's bounding box; shrink the pitch until at
  // least N_p grid points land inside the hull, then thin evenly to N_p.
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double jx = unit(rng), jy = unit(rng);
  double pitch = std::sqrt(area(hull) / config.n_positions);
  std::vector<Point2> inside;
  for (int attempt = 0; attempt < 200; ++attempt) {
    inside.clear();
    for (double y = box.lo.y() + jy * pitch; y <= box.hi.y(); y += pitch) {
      for (double x = box.lo.x() + jx * pitch; x <= box.hi.x(); x += pitch) {
        if (contains(hull, Point2(x, y))) inside.emplace_back(x, y);
      }
    }
    if (static_cast<int>(inside.size()) >= config.n_positions) break;
    pitch *= 0.93;
  }
  std::vector<Point2> positions;
  const std::size_t m = inside.size(), np = static_cast<std::size_t>(config.n_positions);
  if (m <= np) {
    positions = inside;
  } else {
    for (std::size_t k = 0; k < np; ++k) positions.push_back(inside[k * m / np]);
  }

  std::vector<GraspCandidate> out;
  for (std::size_t p = 0; p < positions.size(); ++p) {
    for (int o = 0; o < config.n_orientations; ++o) {
      const double theta = std::numbers::pi * o / config.n_orientations;
      GraspCandidate c{Grasp{Pose2d(positions[p].x(), positions[p].y(), theta)}, static_cast<int>(p), o};
      if (!jaws_collide(scene, c.grasp, gripper)) out.push_back(c);
    }
  }
  return out;
}

double total_intersection_area(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                               const Gripper& gripper) {
  double total = 0;
  for (double a : intersection_areas(scene, group, grasp, gripper)) total += a;
  return total;
}

std::vector<GraspCandidate> rank_grasp_cands(std::vector<GraspCandidate> cands, const SceneState& scene,
                                             const ObjectGroup& group, const Gripper& gripper) {
  const auto polys = group_polygons(scene, group);
  std::vector<std::pair<double, GraspCandidate>> keyed;
  keyed.reserve(cands.size());
  for (auto& c : cands) {
    double total = 0;
    for (double a : intersection_areas(polys, c.grasp, gripper)) total += a;
    keyed.emplace_back(std::round(total / kAreaEps<double>), std::move(c));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<GraspCandidate> out;
  out.reserve(keyed.size());
  for (auto& [_, c] : keyed) out.push_back(std::move(c));
  return out;
}

PlanResult plan_over_candidates(const SceneState& scene, const ObjectGroup& group, const Gripper& gripper,
                                const PlannerConfig& config, const SimParams& params,
                                std::vector<GraspCandidate> cands) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult result;
  result.candidates_total = static_cast<int>(cands.size());

  const bool ranked = config.strategy == Strategy::GP || config.strategy == Strategy::RankPhys;
  const bool filtered = config.strategy == Strategy::GP || config.strategy == Strategy::RandFilPhys;
  if (ranked) {
    cands = rank_grasp_cands(std::move(cands), scene, group, gripper);
  } else {
    std::mt19937_64 rng(config.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(cands.begin(), cands.end(), rng);
  }

  const auto polys = group_polygons(scene, group);
  const auto d_f = filtered ? final_diameters(scene, group) : std::vector<double>{};
  for (const auto& c : cands) {
    if (filtered && !grasp_failure(polys, d_f, c.grasp, gripper).admissible) {
      ++result.filtered_out;
      continue;
    }
    ++result.tested_in_sim;
    try {
      const auto outcome = simulate_squeeze(scene, group, c.grasp, gripper, params);
      result.sim_iterations += outcome.projection_iterations;
      if (outcome.success) {
        result.grasp = c.grasp;
        break;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::InitialPenetration && e.code() != Errc::NonConvergent) throw;
    }
  }
  result.planning_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

PlanResult plan_grasp(const SceneState& scene, const ObjectGroup& group, const Gripper& gripper,
                      const PlannerConfig& config, const SimParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cands = gen_grasp_cands(scene, group, gripper, config);
  auto result = plan_over_candidates(scene, group, gripper, config, params, std::move(cands));
  result.planning_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace pushgrasp
