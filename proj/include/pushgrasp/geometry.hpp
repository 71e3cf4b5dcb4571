#pragma once

// Planar convex-polygon primitives. Everything here is templated on the scalar
// type and operates on immutable values.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pushgrasp/error.hpp"

namespace pushgrasp {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Rot2 = Eigen::Matrix<Scalar, 2, 2>;

// Coincidence tolerance in meters.
template <typename Scalar>
inline constexpr Scalar kGeomEps = Scalar(1e-9);

// Intersections below this area (m^2) are treated as empty.
template <typename Scalar>
inline constexpr Scalar kAreaEps = Scalar(1e-12);

template <typename Scalar>
inline Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
inline Vec2<Scalar> perp(const Vec2<Scalar>& v) {
  return Vec2<Scalar>(-v.y(), v.x());
}

template <typename Scalar>
inline Rot2<Scalar> rotation(Scalar theta) {
  const Scalar c = std::cos(theta), s = std::sin(theta);
  Rot2<Scalar> r;
  r << c, -s, s, c;
  return r;
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
inline Scalar normalize_angle(Scalar theta) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar t = std::fmod(theta, two_pi);
  if (t <= -std::numbers::pi_v<Scalar>) t += two_pi;
  if (t > std::numbers::pi_v<Scalar>) t -= two_pi;
  return t;
}

template <typename Scalar>
struct Pose2 {
  Scalar x{0};
  Scalar y{0};
  Scalar theta{0};

  Pose2() = default;
  Pose2(Scalar x_, Scalar y_, Scalar theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vec2<Scalar> translation() const { return Vec2<Scalar>(x, y); }
  Rot2<Scalar> rotation_matrix() const { return rotation(theta); }

  Vec2<Scalar> apply(const Vec2<Scalar>& p) const { return rotation_matrix() * p + translation(); }
  Vec2<Scalar> apply_vector(const Vec2<Scalar>& v) const { return rotation_matrix() * v; }

  Pose2 inverse() const {
    const Vec2<Scalar> t = rotation(-theta) * (-translation());
    return Pose2(t.x(), t.y(), -theta);
  }

  /// this * other: apply `other` first, then `this`.
  Pose2 compose(const Pose2& other) const {
    const Vec2<Scalar> t = apply(other.translation());
    return Pose2(t.x(), t.y(), theta + other.theta);
  }

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

template <typename Scalar>
class ConvexPolygon {
 public:
  using Point = Vec2<Scalar>;

  ConvexPolygon() = default;

  /// Validates `points` as a strictly convex polygon. Clockwise input is
  /// reversed; collinear interior vertices are dropped.
  static ConvexPolygon from_points(std::vector<Point> points);

  /// Caller guarantees CCW order and strict convexity.
  static ConvexPolygon unchecked(std::vector<Point> points) {
    ConvexPolygon p;
    p.vertices_ = std::move(points);
    return p;
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Point edge(std::size_t i) const { return vertex(i + 1) - vertex(i); }

  /// Outward unit normal of edge i.
  Point normal(std::size_t i) const {
    const Point e = edge(i);
    return Point(e.y(), -e.x()).normalized();
  }

  bool empty() const { return vertices_.empty(); }

 private:
  std::vector<Point> vertices_;
};

template <typename Scalar>
Scalar signed_area(std::span<const Vec2<Scalar>> pts) {
  Scalar s = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(pts[i], pts[(i + 1) % n]);
  return s / Scalar(2);
}

namespace detail {

template <typename Scalar>
Scalar point_line_distance(const Vec2<Scalar>& p, const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  const Vec2<Scalar> ab = b - a;
  const Scalar len = ab.norm();
  if (len <= Scalar(0)) return (p - a).norm();
  return std::abs(cross(ab, Vec2<Scalar>(p - a))) / len;
}

// Removes near-duplicate and collinear vertices from a CCW ring.
template <typename Scalar>
void clean_ring(std::vector<Vec2<Scalar>>& ring) {
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() >= 3; ++i) {
      const std::size_t n = ring.size();
      const auto& prev = ring[(i + n - 1) % n];
      const auto& cur = ring[i];
      const auto& next = ring[(i + 1) % n];
      if ((cur - prev).norm() <= kGeomEps<Scalar> ||
          point_line_distance(cur, prev, next) <= kGeomEps<Scalar>) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

}  // namespace detail

template <typename Scalar>
ConvexPolygon<Scalar> ConvexPolygon<Scalar>::from_points(std::vector<Point> points) {
  if (points.size() < 3) throw Error(Errc::Degenerate, "polygon needs at least 3 vertices");
  for (const auto& p : points) {
    if (!p.allFinite()) throw Error(Errc::Degenerate, "non-finite vertex");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i] - points[j]).norm() <= kGeomEps<Scalar>) {
        throw Error(Errc::Degenerate, "repeated vertex");
      }
    }
  }
  const Scalar a = signed_area<Scalar>(points);
  if (std::abs(a) <= kAreaEps<Scalar>) throw Error(Errc::Degenerate, "zero-area vertex set");
  if (a < 0) std::reverse(points.begin(), points.end());

  // Drop vertices lying on the segment between their neighbours. A vertex on
  // the supporting line but outside the segment is a reflex spike.
  bool changed = true;
  while (changed && points.size() >= 3) {
    changed = false;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& prev = points[(i + n - 1) % n];
      const auto& cur = points[i];
      const auto& next = points[(i + 1) % n];
      if (detail::point_line_distance(cur, prev, next) <= kGeomEps<Scalar>) {
        if ((cur - prev).dot(next - cur) <= 0) throw Error(Errc::NotConvex, "reflex collinear vertex");
        points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (points.size() < 3) throw Error(Errc::Degenerate, "collinear vertices");

  const std::size_t n = points.size();
  Scalar turning = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point e0 = points[(i + 1) % n] - points[i];
    const Point e1 = points[(i + 2) % n] - points[(i + 1) % n];
    const Scalar c = cross(e0, e1);
    if (c <= 0) throw Error(Errc::NotConvex, "reflex vertex");
    turning += std::atan2(c, e0.dot(e1));
  }
  // A self-intersecting star turns all one way but winds more than once.
  if (std::abs(turning - Scalar(2) * std::numbers::pi_v<Scalar>) > Scalar(1e-6)) {
    throw Error(Errc::NotConvex, "vertex ring winds more than once");
  }
  return unchecked(std::move(points));
}

template <typename Scalar>
ConvexPolygon<Scalar> polygon_new(std::vector<Vec2<Scalar>> vertices) {
  return ConvexPolygon<Scalar>::from_points(std::move(vertices));
}

template <typename Scalar>
Scalar area(const ConvexPolygon<Scalar>& poly) {
  return signed_area<Scalar>(poly.vertices());
}

template <typename Scalar>
Vec2<Scalar> centroid(const ConvexPolygon<Scalar>& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  // Shift to the first vertex for conditioning.
  const Vec2<Scalar> o = v[0];
  Vec2<Scalar> c = Vec2<Scalar>::Zero();
  Scalar a2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar> p = v[i] - o, q = v[(i + 1) % n] - o;
    const Scalar w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  return o + c / (Scalar(3) * a2);
}

/// Polar second moment of area about the centroid, divided by area
/// (rotational inertia of a unit-mass uniform lamina).
template <typename Scalar>
Scalar unit_polar_inertia(const ConvexPolygon<Scalar>& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  const Vec2<Scalar> c = centroid(poly);
  Scalar num = 0, a2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar> p = v[i] - c, q = v[(i + 1) % n] - c;
    const Scalar w = cross(p, q);
    a2 += w;
    num += w * (p.dot(p) + p.dot(q) + q.dot(q));
  }
  return num / (Scalar(6) * a2);
}

template <typename Scalar>
ConvexPolygon<Scalar> transform(const ConvexPolygon<Scalar>& poly, const Pose2<Scalar>& pose) {
  const Rot2<Scalar> r = pose.rotation_matrix();
  const Vec2<Scalar> t = pose.translation();
  std::vector<Vec2<Scalar>> out;
  out.reserve(poly.size());
  for (const auto& p : poly.vertices()) out.push_back(r * p + t);
  return ConvexPolygon<Scalar>::unchecked(std::move(out));
}

template <typename Scalar>
ConvexPolygon<Scalar> translate(const ConvexPolygon<Scalar>& poly, const Vec2<Scalar>& t) {
  std::vector<Vec2<Scalar>> out;
  out.reserve(poly.size());
  for (const auto& p : poly.vertices()) out.push_back(p + t);
  return ConvexPolygon<Scalar>::unchecked(std::move(out));
}

/// Andrew's monotone chain. Collinear boundary points are dropped.
template <typename Scalar>
ConvexPolygon<Scalar> convex_hull(std::vector<Vec2<Scalar>> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return (a - b).norm() <= kGeomEps<Scalar>; }),
            pts.end());
  if (pts.size() < 3) throw Error(Errc::Degenerate, "hull needs 3 distinct points");

  auto turn = [](const Vec2<Scalar>& o, const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
    return cross(Vec2<Scalar>(a - o), Vec2<Scalar>(b - o));
  };
  std::vector<Vec2<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  detail::clean_ring(hull);
  if (hull.size() < 3 || signed_area<Scalar>(hull) <= kAreaEps<Scalar>) {
    throw Error(Errc::Degenerate, "collinear point set");
  }
  return ConvexPolygon<Scalar>::unchecked(std::move(hull));
}

/// Clips `a` against every edge of `b` (Sutherland-Hodgman). Returns nullopt
/// when the overlap has fewer than 3 vertices or area below kAreaEps.
template <typename Scalar>
std::optional<ConvexPolygon<Scalar>> intersect_convex(const ConvexPolygon<Scalar>& a,
                                                      const ConvexPolygon<Scalar>& b) {
  std::vector<Vec2<Scalar>> ring = a.vertices();
  std::vector<Vec2<Scalar>> next;
  for (std::size_t e = 0; e < b.size() && !ring.empty(); ++e) {
    const Vec2<Scalar> p0 = b.vertex(e);
    const Vec2<Scalar> dir = b.edge(e);
    auto side = [&](const Vec2<Scalar>& p) { return cross(dir, Vec2<Scalar>(p - p0)); };
    next.clear();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2<Scalar>& cur = ring[i];
      const Vec2<Scalar>& nxt = ring[(i + 1) % n];
      const Scalar sc = side(cur), sn = side(nxt);
      if (sc >= 0) next.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) {
        const Scalar t = sc / (sc - sn);
        next.push_back(cur + t * (nxt - cur));
      }
    }
    ring.swap(next);
  }
  detail::clean_ring(ring);
  if (ring.size() < 3 || signed_area<Scalar>(ring) < kAreaEps<Scalar>) return std::nullopt;
  return ConvexPolygon<Scalar>::unchecked(std::move(ring));
}

template <typename Scalar>
Scalar intersection_area(const ConvexPolygon<Scalar>& a, const ConvexPolygon<Scalar>& b) {
  const auto clip = intersect_convex(a, b);
  return clip ? area(*clip) : Scalar(0);
}

/// Largest separation along any edge normal of either polygon (SAT). Positive
/// means disjoint; the magnitude of a negative value is the penetration depth.
template <typename Scalar>
Scalar sat_separation(const ConvexPolygon<Scalar>& a, const ConvexPolygon<Scalar>& b) {
  auto one_way = [](const ConvexPolygon<Scalar>& ref, const ConvexPolygon<Scalar>& inc) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const Vec2<Scalar> n = ref.normal(i);
      Scalar s = std::numeric_limits<Scalar>::infinity();
      for (const auto& v : inc.vertices()) s = std::min(s, n.dot(v - ref[i]));
      best = std::max(best, s);
    }
    return best;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

template <typename Scalar>
Scalar point_segment_distance(const Vec2<Scalar>& p, const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  const Vec2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  Scalar t = len2 > 0 ? (p - a).dot(ab) / len2 : Scalar(0);
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Minimum Euclidean separation; zero when the polygons overlap or touch.
template <typename Scalar>
Scalar distance(const ConvexPolygon<Scalar>& a, const ConvexPolygon<Scalar>& b) {
  if (sat_separation(a, b) <= 0) return Scalar(0);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (const auto& p : a.vertices()) best = std::min(best, point_segment_distance(p, b.vertex(i), b.vertex(i + 1)));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& p : b.vertices()) best = std::min(best, point_segment_distance(p, a.vertex(i), a.vertex(i + 1)));
  }
  return best;
}

template <typename Scalar>
Scalar longest_diagonal(const ConvexPolygon<Scalar>& poly) {
  Scalar best = 0;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).norm());
  }
  return best;
}

/// Min and max of the vertices projected on `direction`.
template <typename Scalar>
std::pair<Scalar, Scalar> project(const ConvexPolygon<Scalar>& poly, const Vec2<Scalar>& direction) {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -std::numeric_limits<Scalar>::infinity();
  for (const auto& p : poly.vertices()) {
    const Scalar d = p.dot(direction);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

template <typename Scalar>
Scalar width_along(const ConvexPolygon<Scalar>& poly, const Vec2<Scalar>& direction) {
  const auto [lo, hi] = project(poly, direction);
  return hi - lo;
}

template <typename Scalar>
bool contains(const ConvexPolygon<Scalar>& poly, const Vec2<Scalar>& p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (cross(poly.edge(i), Vec2<Scalar>(p - poly[i])) < 0) return false;
  }
  return true;
}

/// Axis-aligned rectangle [x0,x1] x [y0,y1] as a CCW polygon.
template <typename Scalar>
ConvexPolygon<Scalar> rectangle(Scalar x0, Scalar y0, Scalar x1, Scalar y1) {
  return ConvexPolygon<Scalar>::unchecked(
      {Vec2<Scalar>(x0, y0), Vec2<Scalar>(x1, y0), Vec2<Scalar>(x1, y1), Vec2<Scalar>(x0, y1)});
}

template <typename Scalar>
struct Aabb {
  Vec2<Scalar> lo;
  Vec2<Scalar> hi;

  bool overlaps(const Aabb& o, Scalar margin = 0) const {
    return lo.x() <= o.hi.x() + margin && o.lo.x() <= hi.x() + margin && lo.y() <= o.hi.y() + margin &&
           o.lo.y() <= hi.y() + margin;
  }
};

template <typename Scalar>
Aabb<Scalar> bounds(const ConvexPolygon<Scalar>& poly) {
  Aabb<Scalar> box{poly[0], poly[0]};
  for (const auto& p : poly.vertices()) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

using Point2 = Vec2<double>;
using Pose2d = Pose2<double>;
using Polygon = ConvexPolygon<double>;

}  // namespace pushgrasp
