#pragma once

// Frictionless quasi-static squeeze simulator. The jaws close symmetrically in
// small increments; after each increment interpenetration is removed by
// iterative position projection with mass/inertia weighting. Closing stops at
// a jam (an increment that cannot be resolved) or when the jaws meet.

#include <optional>
#include <span>
#include <vector>

#include "pushgrasp/geometry.hpp"
#include "pushgrasp/grasping.hpp"
#include "pushgrasp/scene.hpp"

namespace pushgrasp {

struct SimParams {
  double jaw_step = 5e-4;
  double penetration_tol = 1e-6;
  int max_projection_iters = 200;
  double angle_tol = 1e-3;
  double escape_margin = 1e-3;

  void validate(const Gripper& gripper) const;

  /// Separation below which two bodies count as touching when contacts are
  /// reported.
  double contact_slop() const { return 10 * penetration_tol; }
};

struct BodyRef {
  enum class Kind { Object, LeftJaw, RightJaw };
  Kind kind = Kind::Object;
  ObjectId id = -1;

  static BodyRef object(ObjectId id) { return {Kind::Object, id}; }
  static BodyRef left_jaw() { return {Kind::LeftJaw, -1}; }
  static BodyRef right_jaw() { return {Kind::RightJaw, -1}; }
  bool is_jaw() const { return kind != Kind::Object; }

  friend bool operator==(const BodyRef&, const BodyRef&) = default;
  friend auto operator<=>(const BodyRef&, const BodyRef&) = default;
};

/// One contact point. `normal` points from body_a into body_b.
struct Contact {
  BodyRef body_a;
  BodyRef body_b;
  Point2 point = Point2::Zero();
  Point2 normal = Point2::UnitX();
  double depth = 0;
};

struct JawPair {
  Polygon left;
  Polygon right;
};

/// Jaw rectangles of `gripper` at `opening`, world frame.
JawPair jaws_at(const Gripper& gripper, const Grasp& grasp, double opening);

struct SqueezeOutcome {
  bool success = false;
  bool jammed = false;
  SceneState final_state;
  double initial_opening = 0;
  double final_opening = 0;
  std::vector<ObjectId> grasped;  // sorted
  std::vector<ObjectId> escaped;  // sorted, group members only
  std::vector<ObjectId> chain;    // members of the holding chain, left to right
  std::vector<double> chain_diameters;  // width of each chain member along the closing axis
  std::vector<Contact> contacts;
  int steps = 0;
  long projection_iterations = 0;
};

struct TraceFrame {
  int step = 0;
  double opening = 0;
  std::vector<std::pair<ObjectId, Pose2d>> poses;
  std::vector<Contact> contacts;
};

using SqueezeTrace = std::vector<TraceFrame>;

/// Closes the gripper at `grasp` and reports whether every group member ends
/// in a single collinear frictionless equilibrium chain between the jaws.
///
/// Throws InitialPenetration when bodies overlap deeper than penetration_tol
/// at the start, NonConvergent when those initial contacts cannot be resolved.
SqueezeOutcome simulate_squeeze(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                                const Gripper& gripper, const SimParams& params = {},
                                SqueezeTrace* trace = nullptr);

/// True iff all group members lie on one chain LeftJaw -> o_1 -> ... -> RightJaw
/// of contacts whose normals are antiparallel pairs along the closing axis
/// (within angle_tol) and whose points share one line (within escape_margin).
bool check_equilibrium(const SceneState& state, const ObjectGroup& group, std::span<const Contact> contacts,
                       const Grasp& grasp, const SimParams& params = {});

/// Every valid holding chain (object ids left to right) in the contact set.
std::vector<std::vector<ObjectId>> equilibrium_chains(std::span<const Contact> contacts, const Grasp& grasp,
                                                      const SimParams& params = {});

/// All touching or penetrating body pairs within `margin`.
std::vector<Contact> find_contacts(const SceneState& state, const JawPair& jaws, double margin);

struct ProjectionReport {
  SceneState state;
  bool converged = false;
  int iterations = 0;
  double max_depth = 0;
};

/// Iterative frictionless position projection with the jaws held fixed.
ProjectionReport project_contacts(const SceneState& state, const JawPair& jaws, const SimParams& params);

/// As project_contacts, but throws NonConvergent when penetration remains.
SceneState resolve_contacts(const SceneState& state, const JawPair& jaws, const SimParams& params);

/// Deepest penetration between any two bodies (objects and jaws).
double max_penetration(const SceneState& state, const JawPair& jaws);

}  // namespace pushgrasp
