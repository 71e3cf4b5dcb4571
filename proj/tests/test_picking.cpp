#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pushgrasp/bench.hpp"
#include "pushgrasp/picking.hpp"

using namespace pushgrasp;

namespace {

Scene squares_at(const std::vector<Point2>& centres, double side = 0.02) {
  Scene s;
  int id = 0;
  for (const auto& c : centres) s.objects.push_back({id++, oracle::square(0, 0, side), Pose2d(c.x(), c.y(), 0)});
  return s;
}

std::vector<ObjectGroup> groups(std::initializer_list<std::vector<ObjectId>> ids) {
  std::vector<ObjectGroup> out;
  for (const auto& g : ids) out.emplace_back(g);
  return out;
}

}  // namespace

TEST_CASE("create_obj_groups") {
  const Gripper g;  // radius w_max / 2 = 0.0425
  CHECK(create_obj_groups(squares_at({{0, 0}, {0.03, 0}, {0.3, 0}}), g) == groups({{0, 1}, {0}, {1}, {2}}));
  CHECK(create_obj_groups(squares_at({{0, 0}, {0.03, 0}, {0.015, 0.025}}), g) == groups({{0, 1, 2}, {0}, {1}, {2}}));
  CHECK(create_obj_groups(squares_at({{0, 0}}), g) == groups({{0}}));
  // A chain: 0-1 and 1-2 close, 0-2 too far. {0,1,2} is 1's group.
  CHECK(create_obj_groups(squares_at({{0, 0}, {0.03, 0}, {0.06, 0}}), g) == groups({{0, 1, 2}, {0}, {1}, {2}}));
}

TEST_CASE("create_obj_groups invariants on clutter") {
  const Gripper g;
  const auto scenes = gen_clutter_scenes(2, 61, gen_object_set(0));
  for (const auto& ls : scenes) {
    const auto gs = create_obj_groups(ls.scene, g);
    for (const auto& o : ls.scene.objects) CHECK(std::find(gs.begin(), gs.end(), ObjectGroup({o.id})) != gs.end());
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const auto& grp = gs[i];
      CHECK(std::count(gs.begin(), gs.end(), grp) == 1);
      if (grp.size() < 2) continue;
      for (const auto& other : gs) {
        if (other.size() > grp.size()) CHECK_FALSE(grp.is_subset_of(other));
      }
      // Some member sees every other member within the radius.
      bool centred = false;
      for (ObjectId c : grp.member_ids) {
        bool all = true;
        for (ObjectId m : grp.member_ids) {
          all = all && (ls.scene.at(m).world_centroid() - ls.scene.at(c).world_centroid()).norm() <= g.max_opening / 2;
        }
        centred = centred || all;
      }
      CHECK(centred);
    }
  }
}

TEST_CASE("rank_obj_groups") {
  CHECK(rank_obj_groups(groups({{4}, {1, 2, 3}, {5, 6}})) == groups({{1, 2, 3}, {5, 6}, {4}}));
  CHECK(rank_obj_groups(groups({{2}, {0}, {1}})) == groups({{0}, {1}, {2}}));
  CHECK(rank_obj_groups(groups({{3, 4}, {1, 5}, {1, 2}})) == groups({{1, 2}, {1, 5}, {3, 4}}));
}

TEST_CASE("two adjacent squares") {
  const Scene s = squares_at({{-0.011, 0}, {0.011, 0}});
  PickingPolicy multi;
  const auto m = run_picking(s, multi, PlannerConfig{}, Gripper{}, SimParams{}, 1);
  CHECK(m.grasp_attempts == 1);
  CHECK(m.objects_picked == 2);
  CHECK(m.success_rate() == doctest::Approx(100.0));
  CHECK(m.cleared);

  PickingPolicy single;
  single.mode = PickingMode::SingleObject;
  const auto r = run_picking(s, single, PlannerConfig{}, Gripper{}, SimParams{}, 1);
  CHECK(r.grasp_attempts >= 2);
  CHECK(r.objects_picked == 2);
  for (const auto& a : r.attempts) CHECK(a.group.size() == 1);
}

TEST_CASE("picking report invariants") {
  const auto scenes = gen_scene_grid({4, 5}, 1, 62, gen_object_set(0), Gripper{});
  for (PickingMode mode : {PickingMode::MultiObject, PickingMode::SingleObject}) {
    for (const auto& ls : scenes) {
      PickingPolicy policy;
      policy.mode = mode;
      const auto rep = run_picking(ls.scene, policy, PlannerConfig{}, Gripper{}, SimParams{}, 3);
      CHECK(rep.objects_total == static_cast<int>(ls.scene.size()));
      CHECK(rep.grasp_attempts == static_cast<int>(rep.attempts.size()));
      int successes = 0, picked = 0;
      for (const auto& a : rep.attempts) {
        CHECK(a.success == !a.picked.empty());
        successes += a.success;
        picked += static_cast<int>(a.picked.size());
        if (mode == PickingMode::SingleObject) CHECK(a.group.size() == 1);
      }
      CHECK(rep.successful_attempts == successes);
      CHECK(rep.objects_picked == picked);
      CHECK(rep.objects_picked <= rep.objects_total);
      if (rep.grasp_attempts > 0) {
        CHECK(rep.success_rate() == doctest::Approx(100.0 * successes / rep.grasp_attempts));
      }
      CHECK(rep.percent_picked() == doctest::Approx(100.0 * picked / rep.objects_total));
      CHECK(rep.cleared == (rep.objects_picked == rep.objects_total));
    }
  }
}

TEST_CASE("PickingPolicy validation") {
  PickingPolicy p;
  CHECK_NOTHROW(p.validate());
  p.attempt_limit = 0;
  CHECK_THROWS_AS(p.validate(), Error);
}
