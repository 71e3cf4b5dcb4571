#pragma once

#include <span>
#include <vector>

#include "pushgrasp/grasping.hpp"
#include "pushgrasp/scene.hpp"

namespace pushgrasp {

enum class Rejection { None, Diameter, IntersectionArea, Both };

const char* rejection_name(Rejection r);

struct FilterVerdict {
  bool admissible = true;
  Rejection rejected_by = Rejection::None;
  double h_0 = 0;  // NaN when no member overlaps S
  double h_f_min = 0;
  std::vector<double> areas;
};

/// h_0 >= h_f_min, with 1e-9 m slack.
bool diameter_condition(double h_0, double h_f_min);

/// Every A_i(0) strictly above 1e-12 m^2.
bool intersection_area_condition(std::span<const double> areas);

/// Sum of longest diagonals of every group member except `designated`.
double reach_bound(const ObjectGroup& group, const SceneState& scene, ObjectId designated);
double reach_bound(const ObjectGroup& group, const SceneState& scene);

/// Both necessary conditions. Never runs the squeeze simulator.
FilterVerdict grasp_failure(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                            const Gripper& gripper);

/// Same check with the group's world polygons and per-member minimum final
/// diameters precomputed. When some member misses S, the diameter condition is
/// applied to the members that overlap it.
FilterVerdict grasp_failure(std::span<const Polygon> world_polys, std::span<const double> final_diameters,
                            const Grasp& grasp, const Gripper& gripper);

/// min_final_diameter of each group member, in member order.
std::vector<double> final_diameters(const SceneState& scene, const ObjectGroup& group);

}  // namespace pushgrasp
