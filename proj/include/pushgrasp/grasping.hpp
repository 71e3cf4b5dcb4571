#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pushgrasp/geometry.hpp"
#include "pushgrasp/scene.hpp"

namespace pushgrasp {

/// Parallel-jaw gripper. Defaults approximate a Robotiq 2F-85.
///
/// `max_force` is carried for completeness only: with frictionless
/// quasi-static contact the squeeze outcome does not depend on its magnitude.
struct Gripper {
  double max_opening = 0.085;
  double jaw_length = 0.03;
  double jaw_thickness = 0.01;
  double max_force = 100.0;

  void validate() const;
};

/// Gripper pose u = (x_g, y_g, theta_g). The jaws close along the pose's x-axis.
struct Grasp {
  Pose2d pose;

  Point2 closing_axis() const { return pose.apply_vector(Point2(1, 0)); }
};

/// Rectangle S between the open jaws plus the two jaw rectangles, in world frame.
struct InternalRegion {
  Polygon rect;
  double opening = 0;
  Polygon left_jaw;
  Polygon right_jaw;
};

InternalRegion internal_region(const Gripper& gripper, const Grasp& grasp, double opening);

enum class DiameterKind { ParallelEdges, VertexEdge };

struct Diameter {
  double value = 0;
  DiameterKind kind = DiameterKind::ParallelEdges;
  std::size_t edge = 0;   // reference edge index
  std::size_t other = 0;  // antiparallel edge (ParallelEdges) or vertex (VertexEdge)
};

/// All frictionless point-contact final diameters of one polygon.
struct DiameterSet {
  std::vector<Diameter> diameters;

  bool empty() const { return diameters.empty(); }
  std::size_t size() const { return diameters.size(); }
  double min() const;
};

DiameterSet enumerate_antipodal_diameters(const Polygon& poly);
double min_final_diameter(const Polygon& poly);
double min_multi_diameter(std::span<const Polygon> polys);

/// World-frame polygons of the group members, in group order.
std::vector<Polygon> group_polygons(const SceneState& scene, const ObjectGroup& group);
std::vector<Polygon> group_shapes(const SceneState& scene, const ObjectGroup& group);

/// h_0 = w_max - (b_l + b_r) at full opening. Throws EmptyIntersection when no
/// group member overlaps S.
double initial_multi_diameter(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                              const Gripper& gripper);
std::optional<double> try_initial_multi_diameter(std::span<const Polygon> world_polys, const Grasp& grasp,
                                                 const Gripper& gripper);

/// A_i(0) = area(S ∩ O_i) at full opening, one entry per group member.
std::vector<double> intersection_areas(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                                       const Gripper& gripper);
std::vector<double> intersection_areas(std::span<const Polygon> world_polys, const Grasp& grasp,
                                       const Gripper& gripper);

}  // namespace pushgrasp
