#include "pushgrasp/grasping.hpp"

#include <limits>
#include <numeric>

namespace pushgrasp {

namespace {

// Foot-of-perpendicular must be strictly inside the edge by this parameter margin.
constexpr double kFootEps = 1e-9;
// Antiparallel edges must overlap by more than this along their common line.
constexpr double kOverlapEps = 1e-9;

}  // namespace

void Gripper::validate() const {
  if (!(max_opening > 0) || !(jaw_length > 0) || !(jaw_thickness > 0) || !(max_force > 0)) {
    throw Error(Errc::InvalidInput, "gripper dimensions and force must be positive");
  }
}

InternalRegion internal_region(const Gripper& gripper, const Grasp& grasp, double opening) {
  if (!(opening > 0) || opening > gripper.max_opening) {
    throw Error(Errc::OpeningOutOfRange, "opening " + std::to_string(opening) + " outside (0, " +
                                             std::to_string(gripper.max_opening) + "]");
  }
  const double hw = opening / 2, hl = gripper.jaw_length / 2, t = gripper.jaw_thickness;
  InternalRegion r;
  r.opening = opening;
  r.rect = transform(rectangle(-hw, -hl, hw, hl), grasp.pose);
  r.left_jaw = transform(rectangle(-hw - t, -hl, -hw, hl), grasp.pose);
  r.right_jaw = transform(rectangle(hw, -hl, hw + t, hl), grasp.pose);
  return r;
}

double DiameterSet::min() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : diameters) best = std::min(best, d.value);
  return best;
}

DiameterSet enumerate_antipodal_diameters(const Polygon& poly) {
  DiameterSet out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
    const Point2 nrm = poly.normal(i);
    std::vector<double> depth(n);
    double dmax = 0;
    for (std::size_t k = 0; k < n; ++k) {
      depth[k] = (a - poly[k]).dot(nrm);
      dmax = std::max(dmax, depth[k]);
    }
    std::vector<std::size_t> far;
    for (std::size_t k = 0; k < n; ++k) {
      if (depth[k] >= dmax - kGeomEps<double>) far.push_back(k);
    }

    if (far.size() == 2) {
      // The two farthest vertices are adjacent; the edge between them runs
      // antiparallel to edge i.
      std::size_t j = (far[0] + 1) % n == far[1] ? far[0] : far[1];
      if (j <= i) continue;  // each pair once
      const Point2 u = (b - a).normalized();
      const double lo_i = a.dot(u), hi_i = b.dot(u);
      const double p = poly.vertex(j).dot(u), q = poly.vertex(j + 1).dot(u);
      const double overlap = std::min(hi_i, std::max(p, q)) - std::max(lo_i, std::min(p, q));
      if (overlap > kOverlapEps) out.diameters.push_back({dmax, DiameterKind::ParallelEdges, i, j});
    } else if (far.size() == 1) {
      const Point2 v = poly[far[0]];
      const Point2 e = b - a;
      const double t = (v - a).dot(e) / e.squaredNorm();
      if (t > kFootEps && t < 1 - kFootEps) out.diameters.push_back({dmax, DiameterKind::VertexEdge, i, far[0]});
    }
  }
  return out;
}

double min_final_diameter(const Polygon& poly) { return enumerate_antipodal_diameters(poly).min(); }

double min_multi_diameter(std::span<const Polygon> polys) {
  if (polys.empty()) throw Error(Errc::InvalidInput, "min_multi_diameter needs at least one polygon");
  double h = 0;
  for (const auto& p : polys) h += min_final_diameter(p);
  return h;
}

std::vector<Polygon> group_polygons(const SceneState& scene, const ObjectGroup& group) {
  std::vector<Polygon> out;
  out.reserve(group.size());
  for (ObjectId id : group.member_ids) out.push_back(scene.at(id).world());
  return out;
}

std::vector<Polygon> group_shapes(const SceneState& scene, const ObjectGroup& group) {
  std::vector<Polygon> out;
  out.reserve(group.size());
  for (ObjectId id : group.member_ids) out.push_back(scene.at(id).shape);
  return out;
}

std::optional<double> try_initial_multi_diameter(std::span<const Polygon> world_polys, const Grasp& grasp,
                                                 const Gripper& gripper) {
  const double w = gripper.max_opening, hw = w / 2, hl = gripper.jaw_length / 2;
  const Polygon s = transform(rectangle(-hw, -hl, hw, hl), grasp.pose);
  const Point2 l0 = grasp.pose.apply(Point2(-hw, -hl)), l1 = grasp.pose.apply(Point2(-hw, hl));
  const Point2 r0 = grasp.pose.apply(Point2(hw, -hl)), r1 = grasp.pose.apply(Point2(hw, hl));

  double b_l = std::numeric_limits<double>::infinity();
  double b_r = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& poly : world_polys) {
    const auto clip = intersect_convex(poly, s);
    if (!clip) continue;
    any = true;
    for (const auto& v : clip->vertices()) {
      b_l = std::min(b_l, point_segment_distance(v, l0, l1));
      b_r = std::min(b_r, point_segment_distance(v, r0, r1));
    }
  }
  if (!any) return std::nullopt;
  return w - (b_l + b_r);
}

double initial_multi_diameter(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                              const Gripper& gripper) {
  const auto polys = group_polygons(scene, group);
  const auto h0 = try_initial_multi_diameter(polys, grasp, gripper);
  if (!h0) throw Error(Errc::EmptyIntersection, "no group member overlaps the internal region");
  return *h0;
}

std::vector<double> intersection_areas(std::span<const Polygon> world_polys, const Grasp& grasp,
                                       const Gripper& gripper) {
  const double hw = gripper.max_opening / 2, hl = gripper.jaw_length / 2;
  const Polygon s = transform(rectangle(-hw, -hl, hw, hl), grasp.pose);
  std::vector<double> out;
  out.reserve(world_polys.size());
  for (const auto& poly : world_polys) out.push_back(intersection_area(poly, s));
  return out;
}

std::vector<double> intersection_areas(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                                       const Gripper& gripper) {
  const auto polys = group_polygons(scene, group);
  return intersection_areas(polys, grasp, gripper);
}

}  // namespace pushgrasp
