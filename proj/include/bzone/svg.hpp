#pragma once
// Minimal SVG emission for estimate figures: weighted sample points, the
// fitted zone, and the true zone outline. No drawing dependency; the output
// is a deterministic function of the inputs.

#include <cstdio>
#include <string>

#include "bzone/convex_dp.hpp"
#include "bzone/stump.hpp"

namespace bzone {

namespace svgdetail {

constexpr double kSide = 640.0;
constexpr double kPad = 20.0;

inline double sx(double x) { return kPad + x * (kSide - 2.0 * kPad); }
inline double sy(double y) { return kSide - kPad - y * (kSide - 2.0 * kPad); }

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string polygon_path(const ConvexPolygon& poly) {
  std::string d;
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
    const Point& p = poly.vertices()[i];
    d += (i == 0 ? "M" : "L") + num(sx(p.x)) + " " + num(sy(p.y));
  }
  d += "Z";
  return d;
}

}  // namespace svgdetail

// Sample points are drawn with the weight sign (negative: baseline-like,
// blue; positive: signal-like, red). `truth` may be empty to skip the
// ground-truth outline.
inline std::string render_svg(const WeightedSample& sample, const ConvexPolygon& estimate,
                              const ConvexPolygon& truth = ConvexPolygon{}) {
  using namespace svgdetail;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"white\"/>\n";
  out += "<rect x=\"" + num(kPad) + "\" y=\"" + num(kPad) + "\" width=\"" + num(kSide - 2 * kPad) +
         "\" height=\"" + num(kSide - 2 * kPad) + "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  if (truth.vertex_count() >= 3)
    out += "<path d=\"" + polygon_path(truth) +
           "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6 4\"/>\n";
  if (estimate.vertex_count() >= 3)
    out += "<path d=\"" + polygon_path(estimate) +
           "\" fill=\"#1f77b422\" stroke=\"#1f1f1f\" stroke-width=\"2\"/>\n";
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const Point& p = sample.points[i];
    const bool neg = sample.weights[i] < 0.0;
    out += "<circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) +
           "\" r=\"2.5\" fill=\"" + (neg ? "#1f77b4" : "#d62728") + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace bzone
