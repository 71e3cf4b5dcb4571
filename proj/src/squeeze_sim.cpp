#include "pushgrasp/squeeze_sim.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace pushgrasp {

namespace {

// Prefer the first polygon as reference face unless the second separates by
// more than this; keeps contact features stable between iterations.
constexpr double kFeatureBias = 1e-9;

// Smallest closing increment tried before a jam is declared, as a fraction of
// jaw_step.
constexpr double kMinStepFraction = 1.0 / 4096.0;

// Successive over-relaxation of the positional impulses.
constexpr double kOverRelaxation = 1.9;

struct ManifoldPoint {
  Point2 point;
  double separation = 0;
};

struct Manifold {
  Point2 normal = Point2::UnitX();  // from the first body into the second
  int count = 0;
  std::array<ManifoldPoint, 2> points;
};

std::pair<std::size_t, double> max_separation(const Polygon& ref, const Polygon& inc) {
  std::size_t best_edge = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Point2 n = ref.normal(i);
    double s = std::numeric_limits<double>::infinity();
    for (const auto& v : inc.vertices()) s = std::min(s, n.dot(v - ref[i]));
    if (s > best) {
      best = s;
      best_edge = i;
    }
  }
  return {best_edge, best};
}

// Keeps the part of segment [p0,p1] with dot(n, p) <= offset.
int clip_segment(std::array<Point2, 2>& seg, const Point2& n, double offset) {
  const double d0 = n.dot(seg[0]) - offset, d1 = n.dot(seg[1]) - offset;
  std::array<Point2, 2> out;
  int k = 0;
  if (d0 <= 0) out[k++] = seg[0];
  if (d1 <= 0) out[k++] = seg[1];
  if (d0 * d1 < 0 && k < 2) out[k++] = seg[0] + (d0 / (d0 - d1)) * (seg[1] - seg[0]);
  seg = out;
  return k;
}

// Reference-face / incident-edge contact manifold with up to two points.
bool collide(const Polygon& a, const Polygon& b, double margin, Manifold& m) {
  const auto [edge_a, sep_a] = max_separation(a, b);
  if (sep_a > margin) return false;
  const auto [edge_b, sep_b] = max_separation(b, a);
  if (sep_b > margin) return false;

  const Polygon* ref = &a;
  const Polygon* inc = &b;
  std::size_t edge = edge_a;
  bool flip = false;
  if (sep_b > sep_a + kFeatureBias) {
    ref = &b;
    inc = &a;
    edge = edge_b;
    flip = true;
  }
  const Point2 n = ref->normal(edge);
  std::size_t inc_edge = 0;
  double most_anti = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inc->size(); ++i) {
    const double d = inc->normal(i).dot(n);
    if (d < most_anti) {
      most_anti = d;
      inc_edge = i;
    }
  }
  const Point2 r1 = ref->vertex(edge), r2 = ref->vertex(edge + 1);
  const Point2 t = (r2 - r1).normalized();
  std::array<Point2, 2> seg{inc->vertex(inc_edge), inc->vertex(inc_edge + 1)};
  int k = clip_segment(seg, -t, -t.dot(r1));
  if (k == 2) k = clip_segment(seg, t, t.dot(r2));

  m = Manifold{};
  m.normal = flip ? Point2(-n) : n;
  if (k == 2) {
    for (const auto& p : seg) {
      const double s = n.dot(p - r1);
      if (s <= margin) m.points[m.count++] = {p - 0.5 * s * n, s};
    }
  }
  if (m.count == 0) {
    // Incident edge falls outside the reference face span: use the deepest
    // incident vertex.
    const Point2* deepest = nullptr;
    double s_min = std::numeric_limits<double>::infinity();
    for (const auto& v : inc->vertices()) {
      const double s = n.dot(v - r1);
      if (s < s_min) {
        s_min = s;
        deepest = &v;
      }
    }
    if (!deepest || s_min > margin) return false;
    m.points[m.count++] = {*deepest - 0.5 * s_min * n, s_min};
  }
  return true;
}

struct Body {
  BodyRef ref;
  std::vector<Point2> local;  // vertices about the centroid
  Point2 centroid_offset = Point2::Zero();  // centroid in the shape frame
  Point2 pos = Point2::Zero();
  double angle = 0;
  double inv_mass = 0;
  double inv_inertia = 0;
  Polygon world;
  Aabb<double> box;

  void refresh() {
    const Rot2<double> r = rotation(angle);
    std::vector<Point2> w;
    w.reserve(local.size());
    for (const auto& p : local) w.push_back(r * p + pos);
    world = Polygon::unchecked(std::move(w));
    box = bounds(world);
  }

  // Pose of the shape frame in the simulation frame.
  Pose2d shape_pose() const {
    const Point2 t = pos - rotation(angle) * centroid_offset;
    return Pose2d(t.x(), t.y(), angle);
  }
};

Body make_dynamic(const SceneObject& obj, const Pose2d& pose) {
  Body b;
  b.ref = BodyRef::object(obj.id);
  b.centroid_offset = centroid(obj.shape);
  for (const auto& v : obj.shape.vertices()) b.local.push_back(v - b.centroid_offset);
  b.pos = pose.apply(b.centroid_offset);
  b.angle = pose.theta;
  b.inv_mass = 1.0;
  b.inv_inertia = 1.0 / unit_polar_inertia(obj.shape);
  b.refresh();
  return b;
}

Body make_kinematic(BodyRef ref, const Polygon& world) {
  Body b;
  b.ref = ref;
  b.centroid_offset = Point2::Zero();
  b.pos = centroid(world);
  for (const auto& v : world.vertices()) b.local.push_back(v - b.pos);
  b.refresh();
  return b;
}

// Solves the (at most 2x2) linear complementarity problem for a manifold and
// applies the resulting positional impulses.
void apply_correction(Body& a, Body& b, const Manifold& m) {
  const Point2& n = m.normal;
  std::array<double, 2> rna{}, rnb{}, rhs{};
  for (int k = 0; k < m.count; ++k) {
    rna[k] = cross(Point2(m.points[k].point - a.pos), n);
    rnb[k] = cross(Point2(m.points[k].point - b.pos), n);
    rhs[k] = -m.points[k].separation;
  }
  auto kij = [&](int i, int j) {
    return a.inv_mass + b.inv_mass + a.inv_inertia * rna[i] * rna[j] + b.inv_inertia * rnb[i] * rnb[j];
  };
  std::array<double, 2> lambda{0, 0};
  if (m.count == 1) {
    const double k = kij(0, 0);
    if (k > 0) lambda[0] = std::max(0.0, rhs[0] / k);
  } else {
    const double k11 = kij(0, 0), k22 = kij(1, 1), k12 = kij(0, 1);
    const double det = k11 * k22 - k12 * k12;
    bool solved = false;
    if (det > 1e-12 * k11 * k22) {
      const double l1 = (k22 * rhs[0] - k12 * rhs[1]) / det;
      const double l2 = (k11 * rhs[1] - k12 * rhs[0]) / det;
      if (l1 >= 0 && l2 >= 0) {
        lambda = {l1, l2};
        solved = true;
      }
    }
    if (!solved && k11 > 0) {
      const double l1 = rhs[0] / k11;
      if (l1 >= 0 && k12 * l1 - rhs[1] >= 0) {
        lambda = {l1, 0};
        solved = true;
      }
    }
    if (!solved && k22 > 0) {
      const double l2 = rhs[1] / k22;
      if (l2 >= 0 && k12 * l2 - rhs[0] >= 0) {
        lambda = {0, l2};
        solved = true;
      }
    }
    if (!solved) {
      // Degenerate block; fall back to the deeper point.
      const int k = rhs[0] >= rhs[1] ? 0 : 1;
      const double kk = kij(k, k);
      if (kk > 0) lambda[k] = std::max(0.0, rhs[k] / kk);
    }
  }
  lambda[0] *= kOverRelaxation;
  lambda[1] *= kOverRelaxation;
  const double total = lambda[0] + lambda[1];
  if (total <= 0) return;
  const double twist_a = lambda[0] * rna[0] + lambda[1] * rna[1];
  const double twist_b = lambda[0] * rnb[0] + lambda[1] * rnb[1];
  if (a.inv_mass > 0) {
    a.pos -= a.inv_mass * total * n;
    a.angle -= a.inv_inertia * twist_a;
    a.refresh();
  }
  if (b.inv_mass > 0) {
    b.pos += b.inv_mass * total * n;
    b.angle += b.inv_inertia * twist_b;
    b.refresh();
  }
}

class ContactSolver {
 public:
  explicit ContactSolver(const SimParams& params) : params_(params) {}

  std::size_t add(Body body) {
    bodies_.push_back(std::move(body));
    return bodies_.size() - 1;
  }

  Body& body(std::size_t i) { return bodies_[i]; }
  const std::vector<Body>& bodies() const { return bodies_; }

  // Fixed pair order: dynamic bodies sorted by x, jaw pairs interleaved at
  // the ends of the sweep.
  void build_pairs() {
    std::vector<std::size_t> dyn, kin;
    for (std::size_t i = 0; i < bodies_.size(); ++i) (bodies_[i].inv_mass > 0 ? dyn : kin).push_back(i);
    std::stable_sort(dyn.begin(), dyn.end(),
                     [&](std::size_t a, std::size_t b) { return bodies_[a].pos.x() < bodies_[b].pos.x(); });
    pairs_.clear();
    for (std::size_t k : kin) {
      if (bodies_[k].ref.kind != BodyRef::Kind::RightJaw)
        for (std::size_t d : dyn) pairs_.emplace_back(k, d);
    }
    for (std::size_t i = 0; i < dyn.size(); ++i) {
      for (std::size_t j = i + 1; j < dyn.size(); ++j) pairs_.emplace_back(dyn[i], dyn[j]);
    }
    for (std::size_t k : kin) {
      if (bodies_[k].ref.kind == BodyRef::Kind::RightJaw)
        for (std::size_t d : dyn) pairs_.emplace_back(d, k);
    }
  }

  struct Result {
    bool converged = false;
    int iterations = 0;
    double max_depth = 0;
  };

  Result project(double tol, int max_iters) {
    Result r;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(max_iters));
    const int window = std::max(1, max_iters / 2);
    for (int it = 0; it < max_iters; ++it) {
      double max_depth = 0;
      const bool forward = (it % 2) == 0;
      for (std::size_t q = 0; q < pairs_.size(); ++q) {
        const auto& [ia, ib] = pairs_[forward ? q : pairs_.size() - 1 - q];
        Body& a = bodies_[ia];
        Body& b = bodies_[ib];
        if (!a.box.overlaps(b.box, tol)) continue;
        Manifold m;
        if (!collide(a.world, b.world, 0.0, m)) continue;
        double depth = 0;
        for (int k = 0; k < m.count; ++k) depth = std::max(depth, -m.points[k].separation);
        if (depth <= 0) continue;
        max_depth = std::max(max_depth, depth);
        apply_correction(a, b, m);
      }
      ++r.iterations;
      r.max_depth = max_depth;
      if (max_depth < tol) {
        r.converged = true;
        return r;
      }
      history.push_back(max_depth);
      // Give up early when the observed geometric rate cannot reach `tol`
      // inside the remaining budget.
      if (it >= window) {
        const double then = history[static_cast<std::size_t>(it - window)];
        const double rate = std::pow(std::min(1.0, max_depth / then), 1.0 / window);
        const double predicted = max_depth * std::pow(rate, max_iters - it - 1);
        if (predicted >= tol) return r;
      }
    }
    return r;
  }

  double max_penetration() const {
    double worst = 0;
    for (const auto& [ia, ib] : pairs_) {
      const Body& a = bodies_[ia];
      const Body& b = bodies_[ib];
      if (!a.box.overlaps(b.box)) continue;
      worst = std::max(worst, -sat_separation(a.world, b.world));
    }
    return worst;
  }

  std::vector<Contact> contacts(double margin) const {
    std::vector<Contact> out;
    for (const auto& [ia, ib] : pairs_) {
      const Body& a = bodies_[ia];
      const Body& b = bodies_[ib];
      if (!a.box.overlaps(b.box, margin)) continue;
      Manifold m;
      if (!collide(a.world, b.world, margin, m)) continue;
      for (int k = 0; k < m.count; ++k) {
        out.push_back({a.ref, b.ref, m.points[k].point, m.normal, std::max(0.0, -m.points[k].separation)});
      }
    }
    return out;
  }

  std::vector<Body> save() const { return bodies_; }
  void restore(std::vector<Body> saved) { bodies_ = std::move(saved); }

 private:
  SimParams params_;
  std::vector<Body> bodies_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

void load_world(ContactSolver& solver, const SceneState& state, const JawPair& jaws) {
  for (const auto& obj : state.objects) solver.add(make_dynamic(obj, obj.pose));
  solver.add(make_kinematic(BodyRef::left_jaw(), jaws.left));
  solver.add(make_kinematic(BodyRef::right_jaw(), jaws.right));
  solver.build_pairs();
}

SceneState read_state(const ContactSolver& solver, const SceneState& like, const Pose2d& frame) {
  SceneState out = like;
  std::size_t i = 0;
  for (auto& obj : out.objects) obj.pose = frame.compose(solver.bodies()[i++].shape_pose());
  return out;
}

Contact to_frame(const Contact& c, const Pose2d& frame) {
  Contact w = c;
  w.point = frame.apply(c.point);
  w.normal = frame.apply_vector(c.normal);
  return w;
}

}  // namespace

void SimParams::validate(const Gripper& gripper) const {
  if (!(jaw_step > 0) || !(penetration_tol > 0) || max_projection_iters <= 0 || !(angle_tol > 0) ||
      !(escape_margin > 0)) {
    throw Error(Errc::InvalidInput, "simulation parameters must be positive");
  }
  if (!(jaw_step < gripper.max_opening / 10)) throw Error(Errc::InvalidInput, "jaw_step must be below w_max/10");
}

JawPair jaws_at(const Gripper& gripper, const Grasp& grasp, double opening) {
  const double hw = opening / 2, hl = gripper.jaw_length / 2, t = gripper.jaw_thickness;
  return {transform(rectangle(-hw - t, -hl, -hw, hl), grasp.pose), transform(rectangle(hw, -hl, hw + t, hl), grasp.pose)};
}

std::vector<std::vector<ObjectId>> equilibrium_chains(std::span<const Contact> contacts, const Grasp& grasp,
                                                      const SimParams& params) {
  const Point2 axis = grasp.closing_axis();
  const Point2 lateral = perp(axis);
  const double cos_tol = std::cos(params.angle_tol);

  struct Span {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  std::map<BodyRef, std::map<BodyRef, Span>> edges;
  for (const auto& c : contacts) {
    const double d = c.normal.dot(axis);
    BodyRef left, right;
    if (d >= cos_tol) {
      left = c.body_a;
      right = c.body_b;
    } else if (d <= -cos_tol) {
      left = c.body_b;
      right = c.body_a;
    } else {
      continue;
    }
    if (left.kind == BodyRef::Kind::RightJaw || right.kind == BodyRef::Kind::LeftJaw) continue;
    if (left.is_jaw() && right.is_jaw()) continue;
    Span& s = edges[left][right];
    const double y = c.point.dot(lateral);
    s.lo = std::min(s.lo, y);
    s.hi = std::max(s.hi, y);
  }

  std::vector<std::vector<ObjectId>> chains;
  std::vector<ObjectId> path;
  // lo_max / hi_min over the spans on the path; a common line exists when
  // lo_max - hi_min stays below the margin.
  auto dfs = [&](auto&& self, const BodyRef& node, double lo_max, double hi_min) -> void {
    auto it = edges.find(node);
    if (it == edges.end()) return;
    for (const auto& [next, span] : it->second) {
      const double lo = std::max(lo_max, span.lo), hi = std::min(hi_min, span.hi);
      if (lo - hi >= params.escape_margin) continue;
      if (next.kind == BodyRef::Kind::RightJaw) {
        if (!path.empty()) chains.push_back(path);
        continue;
      }
      if (std::find(path.begin(), path.end(), next.id) != path.end()) continue;
      path.push_back(next.id);
      self(self, next, lo, hi);
      path.pop_back();
    }
  };
  dfs(dfs, BodyRef::left_jaw(), -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity());
  return chains;
}

bool check_equilibrium(const SceneState& state, const ObjectGroup& group, std::span<const Contact> contacts,
                       const Grasp& grasp, const SimParams& params) {
  for (ObjectId id : group.member_ids) state.at(id);
  for (const auto& chain : equilibrium_chains(contacts, grasp, params)) {
    const bool covers = std::all_of(group.member_ids.begin(), group.member_ids.end(), [&](ObjectId id) {
      return std::find(chain.begin(), chain.end(), id) != chain.end();
    });
    if (covers) return true;
  }
  return false;
}

std::vector<Contact> find_contacts(const SceneState& state, const JawPair& jaws, double margin) {
  ContactSolver solver(SimParams{});
  load_world(solver, state, jaws);
  return solver.contacts(margin);
}

double max_penetration(const SceneState& state, const JawPair& jaws) {
  ContactSolver solver(SimParams{});
  load_world(solver, state, jaws);
  return solver.max_penetration();
}

ProjectionReport project_contacts(const SceneState& state, const JawPair& jaws, const SimParams& params) {
  ContactSolver solver(params);
  load_world(solver, state, jaws);
  const auto r = solver.project(params.penetration_tol, params.max_projection_iters);
  return {read_state(solver, state, Pose2d()), r.converged, r.iterations, r.max_depth};
}

SceneState resolve_contacts(const SceneState& state, const JawPair& jaws, const SimParams& params) {
  auto report = project_contacts(state, jaws, params);
  if (!report.converged) {
    throw Error(Errc::NonConvergent, "residual penetration " + std::to_string(report.max_depth) + " after " +
                                         std::to_string(report.iterations) + " iterations");
  }
  return std::move(report.state);
}

SqueezeOutcome simulate_squeeze(const SceneState& scene, const ObjectGroup& group, const Grasp& grasp,
                                const Gripper& gripper, const SimParams& params, SqueezeTrace* trace) {
  gripper.validate();
  params.validate(gripper);
  if (group.size() == 0) throw Error(Errc::InvalidInput, "empty group");
  for (ObjectId id : group.member_ids) scene.at(id);

  // Simulate in the grasp frame: closing along +x, jaws axis-aligned.
  const Pose2d to_grasp = grasp.pose.inverse();
  const double w_max = gripper.max_opening, hl = gripper.jaw_length / 2, thick = gripper.jaw_thickness;

  ContactSolver solver(params);
  for (const auto& obj : scene.objects) solver.add(make_dynamic(obj, to_grasp.compose(obj.pose)));
  const std::size_t left = solver.add(make_kinematic(BodyRef::left_jaw(), rectangle(-w_max / 2 - thick, -hl, -w_max / 2, hl)));
  const std::size_t right = solver.add(make_kinematic(BodyRef::right_jaw(), rectangle(w_max / 2, -hl, w_max / 2 + thick, hl)));
  solver.build_pairs();

  auto set_opening = [&](double w) {
    solver.body(left).pos = Point2(-w / 2 - thick / 2, 0);
    solver.body(left).refresh();
    solver.body(right).pos = Point2(w / 2 + thick / 2, 0);
    solver.body(right).refresh();
  };

  const double tol = params.penetration_tol;
  if (solver.max_penetration() > tol) {
    throw Error(Errc::InitialPenetration, "bodies overlap by more than penetration_tol at t0");
  }
  SqueezeOutcome out;
  const auto initial = solver.project(tol, params.max_projection_iters);
  out.projection_iterations += initial.iterations;
  if (!initial.converged) throw Error(Errc::NonConvergent, "initial contacts could not be resolved");

  auto record = [&](int step, double opening) {
    if (!trace) return;
    TraceFrame f;
    f.step = step;
    f.opening = opening;
    std::size_t i = 0;
    for (const auto& obj : scene.objects) {
      f.poses.emplace_back(obj.id, grasp.pose.compose(solver.bodies()[i++].shape_pose()));
    }
    for (const auto& c : solver.contacts(params.contact_slop())) f.contacts.push_back(to_frame(c, grasp.pose));
    trace->push_back(std::move(f));
  };

  // Euclidean gap from either jaw to the nearest object: each jaw can travel
  // at least this far without touching anything.
  auto jaw_clearance = [&]() {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < solver.bodies().size(); ++i) {
      const Body& b = solver.bodies()[i];
      if (b.inv_mass == 0) continue;
      for (std::size_t j : {left, right}) {
        const Body& jaw = solver.bodies()[j];
        // Cheap lower bound first.
        const double dx = std::max({0.0, jaw.box.lo.x() - b.box.hi.x(), b.box.lo.x() - jaw.box.hi.x()});
        const double dy = std::max({0.0, jaw.box.lo.y() - b.box.hi.y(), b.box.lo.y() - jaw.box.hi.y()});
        if (std::hypot(dx, dy) >= best) continue;
        best = std::min(best, distance(jaw.world, b.world));
      }
    }
    return best;
  };

  double opening = w_max;
  set_opening(opening);
  record(0, opening);
  const double min_step = params.jaw_step * kMinStepFraction;
  double step = params.jaw_step;
  int streak = 0;
  while (opening > 0) {
    const double clearance = jaw_clearance();
    double advance = step;
    if (2 * clearance > advance) advance = 2 * clearance;
    advance = std::min(advance, opening);

    auto saved = solver.save();
    set_opening(opening - advance);
    const auto r = solver.project(tol, params.max_projection_iters);
    out.projection_iterations += r.iterations;
    if (r.converged) {
      opening -= advance;
      ++out.steps;
      record(out.steps, opening);
      if (++streak >= 4 && step < params.jaw_step) {
        step = std::min(params.jaw_step, 2 * step);
        streak = 0;
      }
      continue;
    }
    solver.restore(std::move(saved));
    streak = 0;
    step = std::min(step, advance) / 2;
    if (step < min_step) {
      out.jammed = true;
      break;
    }
  }
  // A jammed chain still carries up to `tol` of penetration per contact. Back
  // the jaws off to the narrowest opening that resolves to tol * 1e-3.
  const double settle_tol = tol * 1e-3;
  if (out.jammed) {
    const auto jammed_state = solver.save();
    double lo = opening, hi = opening + 2 * tol * static_cast<double>(scene.objects.size() + 1);
    auto settles = [&](double w) {
      solver.restore(jammed_state);
      set_opening(w);
      const auto r = solver.project(settle_tol, params.max_projection_iters);
      out.projection_iterations += r.iterations;
      return r.converged;
    };
    bool found = false;
    for (int k = 0; k < 4 && !found; ++k) {
      found = settles(hi);
      if (!found) hi = opening + 2 * (hi - opening);
    }
    if (found) {
      for (int k = 0; k < 12; ++k) {
        const double mid = 0.5 * (lo + hi);
        (settles(mid) ? hi : lo) = mid;
      }
      settles(hi);
      opening = hi;
    } else {
      solver.restore(jammed_state);
      set_opening(opening);
    }
  } else {
    set_opening(std::max(opening, 0.0));
    out.projection_iterations += solver.project(settle_tol, params.max_projection_iters).iterations;
  }

  out.initial_opening = w_max;
  out.final_opening = std::max(opening, 0.0);
  out.final_state = read_state(solver, scene, grasp.pose);
  for (const auto& c : solver.contacts(params.contact_slop())) out.contacts.push_back(to_frame(c, grasp.pose));

  // Containment: centroid inside the jaw sweep band, and positive overlap
  // with the final internal region.
  const double band_x = w_max / 2 + params.escape_margin, band_y = hl + params.escape_margin;
  const Polygon s_final = out.final_opening > 0
                              ? rectangle(-out.final_opening / 2, -hl, out.final_opening / 2, hl)
                              : Polygon();
  std::map<ObjectId, bool> contained;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const Body& b = solver.bodies()[i];
    const bool in_band = std::abs(b.pos.x()) <= band_x && std::abs(b.pos.y()) <= band_y;
    const bool overlaps = !s_final.empty() && intersection_area(b.world, s_final) > kAreaEps<double>;
    contained[b.ref.id] = in_band && overlaps;
    if (!in_band && group.contains(b.ref.id)) out.escaped.push_back(b.ref.id);
  }

  const auto chains = equilibrium_chains(out.contacts, grasp, params);
  std::vector<ObjectId> best_chain;
  for (const auto& chain : chains) {
    const bool all_contained =
        std::all_of(chain.begin(), chain.end(), [&](ObjectId id) { return contained[id]; });
    if (!all_contained) continue;
    for (ObjectId id : chain) out.grasped.push_back(id);
    const bool covers = std::all_of(group.member_ids.begin(), group.member_ids.end(), [&](ObjectId id) {
      return std::find(chain.begin(), chain.end(), id) != chain.end();
    });
    if (covers && !out.success) {
      out.success = true;
      best_chain = chain;
    } else if (!out.success && chain.size() > best_chain.size()) {
      best_chain = chain;
    }
  }
  std::sort(out.grasped.begin(), out.grasped.end());
  out.grasped.erase(std::unique(out.grasped.begin(), out.grasped.end()), out.grasped.end());
  std::sort(out.escaped.begin(), out.escaped.end());

  const Point2 axis = grasp.closing_axis();
  out.chain = best_chain;
  for (ObjectId id : best_chain) out.chain_diameters.push_back(width_along(out.final_state.at(id).world(), axis));
  return out;
}

}  // namespace pushgrasp
