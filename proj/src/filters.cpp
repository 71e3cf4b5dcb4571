#include "pushgrasp/filters.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace pushgrasp {

const char* rejection_name(Rejection r) {
  switch (r) {
    case Rejection::None: return "none";
    case Rejection::Diameter: return "diameter";
    case Rejection::IntersectionArea: return "area";
    case Rejection::Both: return "both";
  }
  return "unknown";
}

bool diameter_condition(double h_0, double h_f_min) { return h_0 >= h_f_min - kGeomEps<double>; }

bool intersection_area_condition(std::span<const double> areas) {
  for (double a : areas) {
    if (!(a > kAreaEps<double>)) return false;
  }
  return true;
}

double reach_bound(const ObjectGroup& group, const SceneState& scene, ObjectId designated) {
  double m = 0;
  for (ObjectId id : group.member_ids) {
    if (id != designated) m += longest_diagonal(scene.at(id).shape);
  }
  return m;
}

double reach_bound(const ObjectGroup& group, const SceneState& scene) {
  if (group.size() == 0) throw Error(Errc::InvalidInput, "empty group");
  return reach_bound(group, scene, group.member_ids.front());
}

FilterVerdict grasp_failure(std::span<const Polygon> world_polys, std::span<const double> final_diameters,
                            const Grasp& grasp, const Gripper& gripper) {
  if (world_polys.size() != final_diameters.size() || world_polys.empty()) {
    throw Error(Errc::InvalidInput, "one final diameter per group polygon required");
  }
  FilterVerdict v;
  v.h_f_min = std::accumulate(final_diameters.begin(), final_diameters.end(), 0.0);
  v.areas = intersection_areas(world_polys, grasp, gripper);
  const auto h0 = try_initial_multi_diameter(world_polys, grasp, gripper);
  v.h_0 = h0 ? *h0 : std::numeric_limits<double>::quiet_NaN();

  const bool area_ok = intersection_area_condition(v.areas);
  // With members outside S the diameter test covers only the members inside.
  double h_f_inside = 0;
  for (std::size_t i = 0; i < v.areas.size(); ++i) {
    if (v.areas[i] > kAreaEps<double>) h_f_inside += final_diameters[i];
  }
  // No member inside S leaves h_0 undefined; the area condition alone rejects.
  const bool diam_ok = !h0 || diameter_condition(*h0, area_ok ? v.h_f_min : h_f_inside);
  if (area_ok && diam_ok) {
    v.rejected_by = Rejection::None;
  } else if (!area_ok && !diam_ok) {
    v.rejected_by = Rejection::Both;
  } else {
    v.rejected_by = area_ok ? Rejection::Diameter : Rejection::IntersectionArea;
  }
  v.admissible = v.rejected_by == Rejection::None;
  return v;
}

std::vector<double> final_diameters(const SceneState& scene, const ObjectGroup& group) {
  std::vector<double> out;
  for (ObjectId id : group.member_ids) out.push_back(min_final_diameter(scene.at(id).shape));
  return out;
}

FilterVerdict grasp_failure(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                            const Gripper& gripper) {
  if (group.size() == 0) throw Error(Errc::InvalidInput, "empty group");
  const auto polys = group_polygons(scene, group);
  return grasp_failure(polys, final_diameters(scene, group), grasp, gripper);
}

}  // namespace pushgrasp
