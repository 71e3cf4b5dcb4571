#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pushgrasp/grasping.hpp"

using namespace pushgrasp;

namespace {

const double kTriHeight = std::sqrt(3.0) / 2;

Polygon unit_triangle() { return polygon_new<double>({{0, 0}, {1, 0}, {0.5, kTriHeight}}); }

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

}  // namespace

TEST_CASE("internal_region") {
  const Gripper g;
  const InternalRegion r = internal_region(g, Grasp{Pose2d(0, 0, 0)}, 0.08);
  const auto box = bounds(r.rect);
  CHECK(box.lo.x() == doctest::Approx(-0.04));
  CHECK(box.hi.x() == doctest::Approx(0.04));
  CHECK(box.lo.y() == doctest::Approx(-0.015));
  CHECK(box.hi.y() == doctest::Approx(0.015));
  CHECK(bounds(r.left_jaw).hi.x() == doctest::Approx(-0.04));
  CHECK(bounds(r.right_jaw).lo.x() == doctest::Approx(0.04));

  const auto turned = bounds(internal_region(g, Grasp{Pose2d(0, 0, std::numbers::pi / 2)}, 0.08).rect);
  CHECK(turned.lo.x() == doctest::Approx(-0.015));
  CHECK(turned.hi.y() == doctest::Approx(0.04));

  try {
    internal_region(g, Grasp{}, 0.2);
    FAIL("expected OpeningOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OpeningOutOfRange);
  }
}

TEST_CASE("enumerate_antipodal_diameters") {
  const auto sq = enumerate_antipodal_diameters(oracle::square(0, 0));
  REQUIRE(sq.size() == 2);
  for (const auto& d : sq.diameters) {
    CHECK(d.value == doctest::Approx(1.0));
    CHECK(d.kind == DiameterKind::ParallelEdges);
  }

  auto rect = enumerate_antipodal_diameters(rectangle(0.0, 0.0, 2.0, 1.0));
  REQUIRE(rect.size() == 2);
  std::vector<double> values;
  for (const auto& d : rect.diameters) values.push_back(d.value);
  std::sort(values.begin(), values.end());
  CHECK(values[0] == doctest::Approx(1.0));
  CHECK(values[1] == doctest::Approx(2.0));

  const auto tri = enumerate_antipodal_diameters(unit_triangle());
  REQUIRE(tri.size() == 3);
  for (const auto& d : tri.diameters) {
    CHECK(d.value == doctest::Approx(kTriHeight));
    CHECK(d.kind == DiameterKind::VertexEdge);
  }
}

TEST_CASE("obtuse vertex does not project inside the opposite edge") {
  // Apex (0.1, 0.2) projects onto edge (0,0)-(1,0); the other two vertices
  // project outside their opposite edges.
  const Polygon tri = polygon_new<double>({{0, 0}, {1, 0}, {0.1, 0.2}});
  const auto set = enumerate_antipodal_diameters(tri);
  REQUIRE(set.size() == 1);
  CHECK(set.diameters[0].value == doctest::Approx(0.2));
}

TEST_CASE("min_final_diameter and min_multi_diameter") {
  CHECK(min_final_diameter(rectangle(0.0, 0.0, 2.0, 1.0)) == doctest::Approx(1.0));
  CHECK(min_final_diameter(unit_triangle()) == doctest::Approx(0.8660).epsilon(1e-4));
  const std::vector<Polygon> pair = {rectangle(0.0, 0.0, 2.0, 1.0), unit_triangle()};
  CHECK(min_multi_diameter(pair) == doctest::Approx(1.0 + kTriHeight));
  const std::vector<Polygon> one = {oracle::square(0, 0)};
  CHECK(min_multi_diameter(one) == doctest::Approx(1.0));
  const std::vector<Polygon> three(3, oracle::square(0, 0));
  CHECK(min_multi_diameter(three) == doctest::Approx(3.0));
}

TEST_CASE("min_final_diameter matches the angle-sweep oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon p = oracle::random_convex(rng, 3 + trial % 4, 1.0);
    CHECK(std::abs(min_final_diameter(p) - oracle::sweep_min_width(p)) <= 1e-6);
  }
}

TEST_CASE("every diameter lies between min width and longest diagonal") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Polygon p = oracle::random_convex(rng, 3 + trial % 4, 1.0);
    const auto set = enumerate_antipodal_diameters(p);
    REQUIRE_FALSE(set.empty());
    const double w = oracle::sweep_min_width(p, 720);
    for (const auto& d : set.diameters) {
      CHECK(d.value > 0);
      CHECK(d.value >= w - 1e-6);
      CHECK(d.value <= longest_diagonal(p) + 1e-12);
    }
  }
}

TEST_CASE("min_multi_diameter is permutation-invariant and additive") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Polygon> polys;
    for (int i = 0; i < 2 + trial % 5; ++i) polys.push_back(oracle::random_convex(rng, 3 + i % 4, 1.0));
    const double h = min_multi_diameter(polys);
    auto shuffled = polys;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(min_multi_diameter(shuffled) == doctest::Approx(h).epsilon(1e-12));
    const std::size_t cut = polys.size() / 2;
    const std::span<const Polygon> all(polys);
    CHECK(min_multi_diameter(all.first(cut)) + min_multi_diameter(all.subspan(cut)) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("initial_multi_diameter") {
  const Gripper g = big_gripper();
  const Grasp centre{Pose2d(0, 0, 0)};
  const Scene two = scene_of({oracle::square(-0.6, 0), oracle::square(0.6, 0)});
  CHECK(initial_multi_diameter(two, whole_scene_group(two), centre, g) == doctest::Approx(2.2));

  const Scene one = scene_of({oracle::square(0, 0)});
  CHECK(initial_multi_diameter(one, whole_scene_group(one), centre, g) == doctest::Approx(1.0));

  const Scene away = scene_of({oracle::square(10, 10)});
  try {
    initial_multi_diameter(away, whole_scene_group(away), centre, g);
    FAIL("expected EmptyIntersection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyIntersection);
  }
}

TEST_CASE("h_0 never exceeds w_max and grows as the outer objects move toward the jaws") {
  const Gripper g = big_gripper();
  const Grasp centre{Pose2d(0, 0, 0)};
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Polygon left = oracle::random_convex(rng, 3 + trial % 4, 0.3);
    const Polygon right = oracle::random_convex(rng, 3 + (trial + 1) % 4, 0.3);
    double prev = -1;
    for (int k = 0; k <= 10; ++k) {
      const double off = 0.35 + 0.08 * k;
      const Scene s = scene_of({translate(left, Point2(-off, 0)), translate(right, Point2(off, 0))});
      const double h = initial_multi_diameter(s, whole_scene_group(s), centre, g);
      CHECK(h <= g.max_opening + 1e-12);
      CHECK(h >= prev - 1e-12);
      prev = h;
    }
  }
}

TEST_CASE("intersection_areas") {
  const Gripper g = big_gripper();
  const Grasp centre{Pose2d(0, 0, 0)};
  // S spans x in [-1.5, 1.5]; this square straddles its right face.
  const Scene s = scene_of({oracle::square(1.5, 0), oracle::square(4, 0)});
  const auto areas = intersection_areas(s, whole_scene_group(s), centre, g);
  REQUIRE(areas.size() == 2);
  CHECK(areas[0] == doctest::Approx(0.5));
  CHECK(areas[1] == 0.0);
}

TEST_CASE("intersection_areas agree with Monte-Carlo on random scenes") {
  const Gripper g;
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(-0.03, 0.03), ang(0, std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Polygon> world;
    for (int i = 0; i < 3; ++i) world.push_back(oracle::random_convex(rng, 3 + i, 0.02, Point2(u(rng), u(rng))));
    const Grasp grasp{Pose2d(u(rng) / 3, u(rng) / 3, ang(rng))};
    const auto areas = intersection_areas(std::span<const Polygon>(world), grasp, g);
    const Polygon rect = internal_region(g, grasp, g.max_opening).rect;
    for (std::size_t i = 0; i < world.size(); ++i) {
      const double mc = oracle::mc_intersection_area(world[i], rect, 200000, 300 + 3 * trial + i);
      CHECK(std::abs(areas[i] - mc) <= 0.03 * mc + 1e-7);
    }
  }
}

TEST_CASE("rigid transform of scene and grasp leaves h_0 and areas unchanged") {
  const Gripper g;
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(-0.02, 0.02), big(-1, 1), ang(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    Scene s;
    for (int i = 0; i < 3; ++i) {
      s.objects.push_back({i, oracle::random_convex(rng, 3 + i, 0.012), Pose2d(0.03 * (i - 1) + u(rng) / 4, u(rng), ang(rng))});
    }
    const Grasp grasp{Pose2d(u(rng) / 4, u(rng) / 4, ang(rng))};
    const Pose2d t(big(rng), big(rng), ang(rng));
    Scene moved = s;
    for (auto& o : moved.objects) o.pose = t.compose(o.pose);
    const Grasp grasp_moved{t.compose(grasp.pose)};
    const ObjectGroup group = whole_scene_group(s);
    const auto a0 = intersection_areas(s, group, grasp, g), a1 = intersection_areas(moved, group, grasp_moved, g);
    for (std::size_t i = 0; i < a0.size(); ++i) CHECK(std::abs(a0[i] - a1[i]) <= 1e-9);
    const auto polys0 = group_polygons(s, group), polys1 = group_polygons(moved, group);
    const auto h0 = try_initial_multi_diameter(polys0, grasp, g), h1 = try_initial_multi_diameter(polys1, grasp_moved, g);
    REQUIRE(h0.has_value() == h1.has_value());
    if (h0) CHECK(std::abs(*h0 - *h1) <= 1e-9);
  }
}
