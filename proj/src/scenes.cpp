#include "pushgrasp/scenes.hpp"

#include <cmath>
#include <numbers>
#include <array>
#include <limits>
#include <numeric>
#include <random>

namespace pushgrasp {

namespace {

constexpr int kMaxRejections = 10000;
constexpr double kMinRadius = 0.008;
constexpr double kMaxRadius = 0.03;
constexpr double kSpanFraction = 0.95;
// Keeps every library shape well above the simulator's smallest resolvable feature.
constexpr double kMinShapeWidth = 0.006;

// Nearest multiple of 1/steps, as the double closest to that decimal.
double round_to(double v, double steps) { return std::round(v * steps) / steps; }

double min_width(const Polygon& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) best = std::min(best, width_along(p, p.normal(i)));
  return best;
}

// Direction of the edge normal across which `p` is narrowest.
double narrow_heading(const Polygon& p) {
  double best = std::numeric_limits<double>::infinity(), heading = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = width_along(p, p.normal(i));
    if (w < best) {
      best = w;
      heading = std::atan2(p.normal(i).y(), p.normal(i).x());
    }
  }
  return heading;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::array<std::uint32_t, 2> out;
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

ShapeLibrary gen_object_set(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> sides(3, 6);
  const double two_pi = 2 * std::numbers::pi;
  ShapeLibrary out;
  while (static_cast<int>(out.size()) < kObjectSetSize) {
    const int n = sides(rng);
    const double radius = kMinRadius + (kMaxRadius - kMinRadius) * unit(rng);
    // Even vertex counts are centrally symmetric (opposite edges parallel),
    // odd counts are unconstrained.
    std::vector<double> angles;
    if (n % 2 == 0) {
      for (int i = 0; i < n / 2; ++i) angles.push_back(std::numbers::pi * unit(rng));
      for (int i = 0; i < n / 2; ++i) angles.push_back(angles[static_cast<std::size_t>(i)] + std::numbers::pi);
    } else {
      for (int i = 0; i < n; ++i) angles.push_back(two_pi * unit(rng));
    }
    std::sort(angles.begin(), angles.end());
    double min_gap = two_pi, max_gap = 0;
    for (int i = 0; i < n; ++i) {
      const double g = i + 1 < n ? angles[i + 1] - angles[i] : angles[0] + two_pi - angles[i];
      min_gap = std::min(min_gap, g);
      max_gap = std::max(max_gap, g);
    }
    if (min_gap < 0.3 || max_gap > std::numbers::pi - 0.2) continue;

    std::vector<Point2> pts;
    for (double a : angles) pts.emplace_back(radius * std::cos(a), radius * std::sin(a));
    Polygon raw = Polygon::from_points(pts);
    const Point2 c = centroid(raw);
    for (auto& p : pts) p = Point2(round_to(p.x() - c.x(), 1e7), round_to(p.y() - c.y(), 1e7));
    Polygon poly = Polygon::from_points(pts);
    if (min_width(poly) < kMinShapeWidth) continue;
    out.push_back(std::move(poly));
  }
  return out;
}

Scene gen_scene(const SceneSpec& spec, const Gripper& gripper) {
  const int k = spec.n_objects;
  if (k < 1 || static_cast<std::size_t>(k) > spec.object_set.size()) {
    throw Error(Errc::InvalidInput, "n_objects must be within the shape library size");
  }
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Random subset; while its minimum stacked width exceeds the budget, swap the
  // widest member for a random narrower shape.
  const double budget = 0.85 * gripper.max_opening;
  std::vector<double> widths;
  for (const auto& shape : spec.object_set) widths.push_back(min_final_diameter(shape));
  std::vector<std::size_t> idx(spec.object_set.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + k);
  std::vector<std::size_t> rest(idx.begin() + k, idx.end());
  auto total = [&] {
    double h = 0;
    for (std::size_t i : chosen) h += widths[i];
    return h;
  };
  while (total() > budget) {
    auto widest = std::max_element(chosen.begin(), chosen.end(),
                                   [&](std::size_t x, std::size_t y) { return widths[x] < widths[y]; });
    std::vector<std::size_t> narrower;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (widths[rest[j]] < widths[*widest]) narrower.push_back(j);
    }
    if (narrower.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, narrower.size() - 1);
    std::swap(*widest, rest[narrower[pick(rng)]]);
  }

  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double phi = std::numbers::pi * unit(rng);
    const Point2 axis(std::cos(phi), std::sin(phi));
    const Point2 lateral = perp(axis);
    std::vector<Pose2d> poses;
    std::vector<Polygon> placed;
    std::vector<double> thetas, lows, highs, gaps;
    double widths_along = 0, gap_total = 0;
    for (int j = 0; j < k; ++j) {
      const Polygon& shape = spec.object_set[chosen[static_cast<std::size_t>(j)]];
      // Orientations start uniform and are pulled towards the narrow side as
      // rejections accumulate.
      const double spread = std::numbers::pi * std::max(0.01, 1.0 - attempt / 2000.0);
      thetas.push_back(phi - narrow_heading(shape) + spread * (2 * unit(rng) - 1));
      const auto [lo, hi] = project(transform(shape, Pose2d(0, 0, thetas.back())), axis);
      lows.push_back(lo);
      highs.push_back(hi);
      widths_along += hi - lo;
      gaps.push_back(j > 0 ? spec.min_separation + (spec.max_gap - spec.min_separation) * unit(rng) : 0.0);
      gap_total += gaps.back();
    }
    // The chain must fit between the open jaws.
    const double room = kSpanFraction * gripper.max_opening - widths_along;
    if (room < (k - 1) * spec.min_separation) continue;
    const double gap_scale = gap_total > room ? room / gap_total : 1.0;
    double cursor = 0;
    for (int j = 0; j < k; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (j > 0) cursor += std::max(spec.min_separation, gaps[jj] * gap_scale);
      const double along = cursor - lows[jj];
      cursor = along + highs[jj];
      const double side = spec.lateral_jitter * (2 * unit(rng) - 1);
      const Point2 c = along * axis + side * lateral;
      poses.emplace_back(c.x(), c.y(), thetas[jj]);
    }
    // Centre the chain in the region with a random offset that keeps it inside.
    const Point2 mid = 0.5 * cursor * axis;
    const Point2 offset(spec.region_width * (unit(rng) - 0.5) * 0.2, spec.region_height * (unit(rng) - 0.5) * 0.2);
    Scene scene;
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      Pose2d p = poses[static_cast<std::size_t>(j)];
      p.x += offset.x() - mid.x() + spec.region_width / 2;
      p.y += offset.y() - mid.y() + spec.region_height / 2;
      SceneObject obj{j, spec.object_set[chosen[static_cast<std::size_t>(j)]], p};
      const Polygon w = obj.world();
      const auto box = bounds(w);
      if (box.lo.x() < 0 || box.lo.y() < 0 || box.hi.x() > spec.region_width || box.hi.y() > spec.region_height) {
        ok = false;
        break;
      }
      for (const auto& other : placed) {
        if (distance(w, other) < spec.min_separation) ok = false;
      }
      placed.push_back(w);
      scene.objects.push_back(std::move(obj));
    }
    if (ok) return scene;
  }
  throw Error(Errc::PlacementFailed, "no valid layout after 10^4 attempts");
}

Scene gen_cluttered_scene(const ClutterSpec& spec) {
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double margin = kMaxRadius;
  std::vector<Point2> centres;
  for (int c = 0; c < spec.n_clusters; ++c) {
    centres.emplace_back(margin + (spec.region_width - 2 * margin) * unit(rng),
                         margin + (spec.region_height - 2 * margin) * unit(rng));
  }
  std::uniform_int_distribution<int> pick_cluster(0, spec.n_clusters - 1);
  Scene scene;
  std::vector<Polygon> placed;
  for (std::size_t i = 0; i < spec.object_set.size(); ++i) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxRejections && !done; ++attempt) {
      const Point2& c = centres[static_cast<std::size_t>(pick_cluster(rng))];
      const double r = spec.cluster_radius * std::sqrt(unit(rng));
      const double a = 2 * std::numbers::pi * unit(rng);
      const Pose2d pose(c.x() + r * std::cos(a), c.y() + r * std::sin(a), 2 * std::numbers::pi * unit(rng));
      SceneObject obj{static_cast<ObjectId>(i), spec.object_set[i], pose};
      const Polygon w = obj.world();
      const auto box = bounds(w);
      if (box.lo.x() < 0 || box.lo.y() < 0 || box.hi.x() > spec.region_width || box.hi.y() > spec.region_height) {
        continue;
      }
      bool clear = true;
      for (const auto& other : placed) {
        if (distance(w, other) < spec.min_separation) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      placed.push_back(w);
      scene.objects.push_back(std::move(obj));
      done = true;
    }
    if (!done) throw Error(Errc::PlacementFailed, "could not place object " + std::to_string(i));
  }
  return scene;
}

}  // namespace pushgrasp
