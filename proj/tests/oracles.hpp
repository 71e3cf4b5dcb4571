#pragma once

// Independent reference computations and random generators for the tests.
// Nothing here calls the library's clipping, distance or diameter code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "pushgrasp/geometry.hpp"

namespace oracle {

using pushgrasp::Point2;
using pushgrasp::Polygon;

inline bool inside(const std::vector<Point2>& ring, const Point2& p) {
  // Crossing-number test.
  bool in = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = ring[i];
    const Point2& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

inline double shoelace(const std::vector<Point2>& ring) {
  double s = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % ring.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return std::abs(s) / 2;
}

/// Monte-Carlo estimate of area(a ∩ b) with `samples` uniform points in the
/// overlap of the two bounding boxes.
inline double mc_intersection_area(const Polygon& a, const Polygon& b, int samples, std::uint64_t seed) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& p : a.vertices()) {
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  }
  double bx0 = std::numeric_limits<double>::infinity(), by0 = bx0, bx1 = -bx0, by1 = -bx0;
  for (const auto& p : b.vertices()) {
    bx0 = std::min(bx0, p.x());
    by0 = std::min(by0, p.y());
    bx1 = std::max(bx1, p.x());
    by1 = std::max(by1, p.y());
  }
  x0 = std::max(x0, bx0);
  y0 = std::max(y0, by0);
  x1 = std::min(x1, bx1);
  y1 = std::min(y1, by1);
  if (x1 <= x0 || y1 <= y0) return 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  long hits = 0;
  for (int i = 0; i < samples; ++i) {
    const Point2 p(ux(rng), uy(rng));
    if (inside(a.vertices(), p) && inside(b.vertices(), p)) ++hits;
  }
  return (x1 - x0) * (y1 - y0) * static_cast<double>(hits) / samples;
}

inline double sweep_width(const Polygon& poly, double theta) {
  const Point2 u(std::cos(theta), std::sin(theta));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : poly.vertices()) {
    lo = std::min(lo, p.dot(u));
    hi = std::max(hi, p.dot(u));
  }
  return hi - lo;
}

/// Minimum width over `directions` samples of [0, pi), refined by repeated
/// zooming around the best few samples.
inline double sweep_min_width(const Polygon& poly, int directions = 3600) {
  const double step = std::numbers::pi / directions;
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < directions; ++i) samples.emplace_back(sweep_width(poly, i * step), i * step);
  std::sort(samples.begin(), samples.end());
  double best = samples.front().first;
  for (std::size_t k = 0; k < std::min<std::size_t>(8, samples.size()); ++k) {
    double centre = samples[k].second, half = step;
    for (int round = 0; round < 12; ++round) {
      double local = std::numeric_limits<double>::infinity(), arg = centre;
      for (int j = -20; j <= 20; ++j) {
        const double t = centre + half * j / 20.0;
        const double w = sweep_width(poly, t);
        if (w < local) {
          local = w;
          arg = t;
        }
      }
      best = std::min(best, local);
      centre = arg;
      half /= 10;
    }
  }
  return best;
}

/// Points spaced at most `spacing` apart along the polygon boundary.
inline std::vector<Point2> boundary_samples(const Polygon& poly, double spacing) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / spacing)));
    for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

/// Closest pair of boundary samples; overestimates the true distance by at
/// most `spacing`.
inline double sampled_distance(const Polygon& a, const Polygon& b, double spacing) {
  const auto pa = boundary_samples(a, spacing), pb = boundary_samples(b, spacing);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pa) {
    for (const auto& q : pb) best = std::min(best, (p - q).norm());
  }
  return best;
}

/// Hull vertices by checking every ordered pair as a candidate edge.
inline std::vector<Point2> brute_force_hull_vertices(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (pts[i] - pts[j]).norm() < 1e-12) continue;
      const Point2 e = pts[j] - pts[i];
      bool edge = true;
      for (std::size_t k = 0; k < n && edge; ++k) {
        const Point2 d = pts[k] - pts[i];
        const double c = e.x() * d.y() - e.y() * d.x();
        if (c < -1e-12) edge = false;
        // A collinear point beyond the segment makes (i, j) not an extreme pair.
        if (std::abs(c) <= 1e-12 && (d.dot(e) < -1e-12 || d.dot(e) > e.dot(e) + 1e-12)) edge = false;
      }
      if (edge && std::none_of(out.begin(), out.end(), [&](const Point2& p) { return (p - pts[i]).norm() < 1e-12; })) {
        out.push_back(pts[i]);
      }
    }
  }
  // Counter-clockwise around the vertex mean.
  Point2 mean = Point2::Zero();
  for (const auto& p : out) mean += p;
  mean /= static_cast<double>(std::max<std::size_t>(1, out.size()));
  std::sort(out.begin(), out.end(), [&](const Point2& a, const Point2& b) {
    return std::atan2(a.y() - mean.y(), a.x() - mean.x()) < std::atan2(b.y() - mean.y(), b.x() - mean.x());
  });
  return out;
}

/// Random strictly convex polygon with `n` vertices on a stretched circle,
/// centred near `centre`, circumradius about `radius`.
inline Polygon random_convex(std::mt19937_64& rng, int n, double radius, const Point2& centre = Point2::Zero()) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2 * std::numbers::pi;
  while (true) {
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(two_pi * unit(rng));
    std::sort(angles.begin(), angles.end());
    double min_gap = two_pi, max_gap = 0;
    for (int i = 0; i < n; ++i) {
      const double g = i + 1 < n ? angles[i + 1] - angles[i] : angles[0] + two_pi - angles[i];
      min_gap = std::min(min_gap, g);
      max_gap = std::max(max_gap, g);
    }
    if (min_gap < 0.2 || max_gap > std::numbers::pi - 0.1) continue;
    const double stretch = 0.5 + 0.5 * unit(rng), tilt = two_pi * unit(rng);
    const double c = std::cos(tilt), s = std::sin(tilt);
    std::vector<Point2> pts;
    for (double a : angles) {
      const double x = radius * std::cos(a), y = radius * stretch * std::sin(a);
      pts.emplace_back(centre.x() + c * x - s * y, centre.y() + s * x + c * y);
    }
    return Polygon::from_points(pts);
  }
}

inline Polygon square(double cx, double cy, double side = 1.0) {
  const double h = side / 2;
  return pushgrasp::rectangle(cx - h, cy - h, cx + h, cy + h);
}

}  // namespace oracle
