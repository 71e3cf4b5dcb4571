#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pushgrasp/bench.hpp"
#include "pushgrasp/squeeze_sim.hpp"

using namespace pushgrasp;

namespace {

Scene scene_of(const std::vector<Polygon>& world) {
  Scene s;
  int id = 0;
  for (const auto& p : world) {
    const Point2 c = centroid(p);
    s.objects.push_back({id++, translate(p, Point2(-c)), Pose2d(c.x(), c.y(), 0)});
  }
  return s;
}

Gripper big_gripper() {
  Gripper g;
  g.max_opening = 3.0;
  g.jaw_length = 2.0;
  g.jaw_thickness = 0.1;
  return g;
}

Contact contact(BodyRef a, BodyRef b, Point2 point, Point2 normal) {
  Contact c;
  c.body_a = a;
  c.body_b = b;
  c.point = point;
  c.normal = normal.normalized();
  return c;
}

BodyRef obj(ObjectId id) { return BodyRef::object(id); }

}  // namespace

TEST_CASE("single square squeeze") {
  const Scene s = scene_of({oracle::square(0, 0)});
  const auto out = simulate_squeeze(s, whole_scene_group(s), Grasp{}, big_gripper());
  CHECK(out.success);
  CHECK(out.final_opening == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(out.grasped == std::vector<ObjectId>{0});
  CHECK(out.escaped.empty());
}

TEST_CASE("two squares stack edge to edge") {
  const Scene s = scene_of({oracle::square(-0.6, 0), oracle::square(0.6, 0)});
  const auto out = simulate_squeeze(s, whole_scene_group(s), Grasp{}, big_gripper());
  CHECK(out.success);
  CHECK(out.final_opening == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(out.grasped == std::vector<ObjectId>{0, 1});
  CHECK(out.chain == std::vector<ObjectId>{0, 1});
  for (const auto& o : out.final_state.objects) CHECK(std::abs(o.pose.theta) < 1e-9);
}

TEST_CASE("unreachable group member makes the squeeze fail") {
  const Scene s = scene_of({oracle::square(0, 0), oracle::square(0, 5)});
  const auto out = simulate_squeeze(s, whole_scene_group(s), Grasp{}, big_gripper());
  CHECK_FALSE(out.success);
  CHECK(out.grasped == std::vector<ObjectId>{0});
  CHECK(out.final_state.at(1).pose == s.at(1).pose);
}

TEST_CASE("initial penetration is rejected") {
  const Scene s = scene_of({oracle::square(0, 0), oracle::square(0.5, 0)});
  try {
    simulate_squeeze(s, whole_scene_group(s), Grasp{}, big_gripper());
    FAIL("expected InitialPenetration");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InitialPenetration);
  }
}

TEST_CASE("check_equilibrium") {
  Scene s = scene_of({oracle::square(-1, 0), oracle::square(0, 0), oracle::square(1, 0)});
  const ObjectGroup group = whole_scene_group(s);
  const Point2 x(1, 0);
  const std::vector<Contact> chain = {
      contact(BodyRef::left_jaw(), obj(0), {-1.5, 0}, x), contact(obj(0), obj(1), {-0.5, 0}, x),
      contact(obj(1), obj(2), {0.5, 0}, x), contact(obj(2), BodyRef::right_jaw(), {1.5, 0}, x)};
  CHECK(check_equilibrium(s, group, chain, Grasp{}));

  // The same contacts reported with bodies swapped and normals flipped.
  std::vector<Contact> flipped;
  for (const auto& c : chain) flipped.push_back(contact(c.body_b, c.body_a, c.point, -c.normal));
  CHECK(check_equilibrium(s, group, flipped, Grasp{}));

  const double tilt = 10 * std::numbers::pi / 180;
  const Scene one = scene_of({oracle::square(0, 0)});
  const std::vector<Contact> skew = {contact(BodyRef::left_jaw(), obj(0), {-0.5, 0}, x),
                                     contact(obj(0), BodyRef::right_jaw(), {0.5, 0}, {std::cos(tilt), std::sin(tilt)})};
  CHECK_FALSE(check_equilibrium(one, whole_scene_group(one), skew, Grasp{}));

  const std::vector<Contact> single = {contact(BodyRef::left_jaw(), obj(0), {-0.5, 0}, x)};
  CHECK_FALSE(check_equilibrium(one, whole_scene_group(one), single, Grasp{}));

  // Contacts on parallel but distinct lines do not form a chain.
  const std::vector<Contact> offset = {contact(BodyRef::left_jaw(), obj(0), {-0.5, 0.3}, x),
                                       contact(obj(0), BodyRef::right_jaw(), {0.5, -0.3}, x)};
  CHECK_FALSE(check_equilibrium(one, whole_scene_group(one), offset, Grasp{}));

  // A chain that skips a group member does not hold the group.
  const std::vector<Contact> partial = {chain[0], contact(obj(0), BodyRef::right_jaw(), {-0.5, 0}, x)};
  CHECK_FALSE(check_equilibrium(s, group, partial, Grasp{}));
}

TEST_CASE("resolve_contacts") {
  const SimParams params;
  const Scene s = scene_of({oracle::square(0, 0)});
  const JawPair push{rectangle(-0.6, -1.0, -0.5 + 1e-4, 1.0), rectangle(5.0, -1.0, 5.1, 1.0)};
  const Scene out = resolve_contacts(s, push, params);
  CHECK(out.at(0).pose.x == doctest::Approx(1e-4).epsilon(1e-2));
  CHECK(std::abs(out.at(0).pose.y) < 1e-12);
  CHECK(std::abs(out.at(0).pose.theta) < 1e-12);

  // Jaw corner pressing one vertex of a tilted square.
  Scene tilted = s;
  tilted.objects[0].pose = Pose2d(0, 0, 0.3);
  const Polygon w = tilted.objects[0].world();
  double left = 0;
  Point2 tip;
  for (const auto& v : w.vertices()) {
    if (v.x() < left) {
      left = v.x();
      tip = v;
    }
  }
  const JawPair poke{rectangle(left - 0.1, tip.y() - 0.05, left + 1e-4, tip.y() + 0.3), rectangle(5.0, -1.0, 5.1, 1.0)};
  REQUIRE(max_penetration(tilted, poke) > params.penetration_tol);
  const Scene moved = resolve_contacts(tilted, poke, params);
  CHECK(max_penetration(moved, poke) < params.penetration_tol);
  CHECK(moved.at(0).pose.x > 0);
  CHECK(moved.at(0).pose.theta != doctest::Approx(0.3).epsilon(1e-9));

  // Two touching squares pressed from both sides cannot move.
  const Scene pair = scene_of({oracle::square(-0.5, 0), oracle::square(0.5, 0)});
  const JawPair clamp{rectangle(-1.1, -1.0, -1.0 + 1e-4, 1.0), rectangle(1.0 - 1e-4, -1.0, 1.1, 1.0)};
  const auto report = project_contacts(pair, clamp, params);
  CHECK_FALSE(report.converged);
  try {
    resolve_contacts(pair, clamp, params);
    FAIL("expected NonConvergent");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonConvergent);
  }
}

TEST_CASE("squeeze properties on generated scenes") {
  const ShapeLibrary lib = gen_object_set(0);
  const Gripper g;
  const SimParams params;
  const auto scenes = gen_scene_grid({2, 3, 4}, 2, 41, lib, g);
  int successes = 0;
  for (const auto& ls : scenes) {
    const ObjectGroup group = whole_scene_group(ls.scene);
    const auto cands = gen_grasp_cands(ls.scene, group, g, PlannerConfig{});
    for (std::size_t i = 0; i < cands.size(); i += 7) {
      const Grasp& grasp = cands[i].grasp;
      SqueezeTrace trace;
      const auto out = simulate_squeeze(ls.scene, group, grasp, g, params, &trace);

      // Monotone opening and bounded per-increment displacement.
      for (std::size_t f = 1; f < trace.size(); ++f) {
        CHECK(trace[f].opening <= trace[f - 1].opening);
        for (std::size_t k = 0; k < trace[f].poses.size(); ++k) {
          const Point2 d = trace[f].poses[k].second.translation() - trace[f - 1].poses[k].second.translation();
          CHECK(d.norm() <= params.jaw_step * params.max_projection_iters);
        }
      }
      CHECK(out.final_opening <= out.initial_opening);

      // No tunnelling: every object stays between the jaws or beside them.
      const JawPair jaws = jaws_at(g, grasp, std::max(out.final_opening, 1e-6));
      CHECK(max_penetration(out.final_state, jaws) < 1e-4);

      if (!out.success) continue;
      ++successes;
      const auto polys = group_polygons(ls.scene, group);
      const double h0 = *try_initial_multi_diameter(polys, grasp, g);
      const double h_f_min = min_multi_diameter(group_shapes(ls.scene, group));
      CHECK(h0 >= out.final_opening - 1e-9);
      CHECK(out.final_opening >= h_f_min - 1e-6);
      double sum = 0;
      for (double d : out.chain_diameters) sum += d;
      CHECK(std::abs(sum - out.final_opening) <= 1e-6);
      CHECK(check_equilibrium(out.final_state, group, out.contacts, grasp, params));
    }
  }
  CHECK(successes > 0);
}

TEST_CASE("simulation is deterministic") {
  const ShapeLibrary lib = gen_object_set(0);
  const Gripper g;
  const auto scenes = gen_scene_grid({3}, 1, 42, lib, g);
  const Scene& s = scenes[0].scene;
  const auto cands = gen_grasp_cands(s, whole_scene_group(s), g, PlannerConfig{});
  REQUIRE(cands.size() > 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto a = simulate_squeeze(s, whole_scene_group(s), cands[i].grasp, g);
    const auto b = simulate_squeeze(s, whole_scene_group(s), cands[i].grasp, g);
    CHECK(a.success == b.success);
    CHECK(a.final_opening == b.final_opening);
    CHECK(a.steps == b.steps);
    CHECK(a.projection_iterations == b.projection_iterations);
    for (std::size_t k = 0; k < a.final_state.size(); ++k) CHECK(a.final_state.objects[k].pose == b.final_state.objects[k].pose);
  }
}

TEST_CASE("SimParams validation") {
  SimParams p;
  CHECK_NOTHROW(p.validate(Gripper{}));
  p.jaw_step = 0.01;
  CHECK_THROWS_AS(p.validate(Gripper{}), Error);
  p = SimParams{};
  p.max_projection_iters = 0;
  CHECK_THROWS_AS(p.validate(Gripper{}), Error);
}
