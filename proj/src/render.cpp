#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "pushgrasp/bench.hpp"

namespace pushgrasp {

namespace {

constexpr double kPxPerMeter = 1000.0;
constexpr double kPadPx = 10.0;

constexpr std::array<const char*, 8> kPalette = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                                 "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

struct Canvas {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void include(const Polygon& poly) {
    for (const auto& p : poly.vertices()) {
      min_x = std::min(min_x, p.x());
      min_y = std::min(min_y, p.y());
      max_x = std::max(max_x, p.x());
      max_y = std::max(max_y, p.y());
    }
  }

  bool empty() const { return !(min_x <= max_x); }
  double width() const { return (max_x - min_x) * kPxPerMeter + 2 * kPadPx; }
  double height() const { return (max_y - min_y) * kPxPerMeter + 2 * kPadPx; }

  // SVG y grows downwards.
  std::string points(const Polygon& poly) const {
    std::string out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& p = poly.vertex(i);
      if (i) out += ' ';
      out += px((p.x() - min_x) * kPxPerMeter + kPadPx) + "," + px((max_y - p.y()) * kPxPerMeter + kPadPx);
    }
    return out;
  }

  std::string path(const Polygon& poly) const {
    std::string out = "M";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& p = poly.vertex(i);
      out += (i ? " L" : "") + px((p.x() - min_x) * kPxPerMeter + kPadPx) + " " +
             px((max_y - p.y()) * kPxPerMeter + kPadPx);
    }
    return out + " Z";
  }
};

}  // namespace

std::string render_svg(const Scene& scene, const RenderOptions& options) {
  Canvas canvas;
  for (const auto& o : scene.objects) canvas.include(o.world());
  std::optional<InternalRegion> region;
  if (options.grasp) {
    region = internal_region(options.gripper, *options.grasp, options.gripper.max_opening);
    canvas.include(region->left_jaw);
    canvas.include(region->right_jaw);
  }
  if (options.trace) {
    for (const auto& f : *options.trace) {
      for (const auto& [id, pose] : f.poses) {
        if (const SceneObject* o = scene.find(id)) canvas.include(transform(o->shape, pose));
      }
    }
  }
  if (canvas.empty()) {
    canvas.min_x = canvas.min_y = 0;
    canvas.max_x = canvas.max_y = 0;
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(canvas.width()) << "\" height=\""
      << px(canvas.height()) << "\" viewBox=\"0 0 " << px(canvas.width()) << ' ' << px(canvas.height()) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << px(canvas.width()) << "\" height=\"" << px(canvas.height())
      << "\" fill=\"white\"/>\n";
  for (const auto& o : scene.objects) {
    const char* color = kPalette[static_cast<std::size_t>(std::abs(o.id)) % kPalette.size()];
    svg << "<path id=\"object-" << o.id << "\" d=\"" << canvas.path(o.world()) << "\" fill=\"" << color
        << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
  }
  if (options.trace && !options.trace->empty()) {
    // Keyframes: roughly ten evenly spaced frames plus the last one.
    const std::size_t n = options.trace->size();
    const std::size_t stride = std::max<std::size_t>(1, n / 10);
    svg << "<g id=\"trace\" fill=\"none\" stroke=\"#555555\" stroke-width=\"0.4\" stroke-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < n; ++i) {
      if (i % stride != 0 && i + 1 != n) continue;
      const TraceFrame& f = (*options.trace)[i];
      for (const auto& [id, pose] : f.poses) {
        const SceneObject* o = scene.find(id);
        if (!o) continue;
        svg << "<polygon data-step=\"" << f.step << "\" points=\"" << canvas.points(transform(o->shape, pose))
            << "\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  if (region) {
    svg << "<polygon id=\"internal-region\" points=\"" << canvas.points(region->rect)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"4 2\"/>\n";
    svg << "<polygon id=\"jaw-left\" points=\"" << canvas.points(region->left_jaw) << "\" fill=\"#000000\"/>\n";
    svg << "<polygon id=\"jaw-right\" points=\"" << canvas.points(region->right_jaw) << "\" fill=\"#000000\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pushgrasp
