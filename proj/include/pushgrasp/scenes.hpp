#pragma once

#include <cstdint>
#include <vector>

#include "pushgrasp/grasping.hpp"
#include "pushgrasp/scene.hpp"

namespace pushgrasp {

using ShapeLibrary = std::vector<Polygon>;

inline constexpr int kObjectSetSize = 33;

/// 33 seeded random convex polygons, 3-6 vertices, circumradius in
/// [0.008, 0.03] m, centroid at the local origin. Even vertex counts are
/// centrally symmetric.
ShapeLibrary gen_object_set(std::uint64_t seed);

/// Placement for one grasp-class scene: `n_objects` library shapes laid out
/// along a random axis with small gaps and lateral jitter.
struct SceneSpec {
  int n_objects = 2;
  ShapeLibrary object_set;
  double region_width = 0.3;
  double region_height = 0.3;
  double min_separation = 1e-3;
  double max_gap = 0.012;
  double lateral_jitter = 0.005;
  std::uint64_t rng_seed = 0;
};

/// Throws PlacementFailed after 10^4 rejected layouts.
Scene gen_scene(const SceneSpec& spec, const Gripper& gripper = {});

/// Table-clearing scene: every library shape once, scattered around a few
/// cluster centres.
struct ClutterSpec {
  ShapeLibrary object_set;
  int n_clusters = 8;
  double cluster_radius = 0.05;
  double region_width = 0.6;
  double region_height = 0.6;
  double min_separation = 2e-3;
  std::uint64_t rng_seed = 0;
};

Scene gen_cluttered_scene(const ClutterSpec& spec);

/// Deterministic 64-bit seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace pushgrasp
