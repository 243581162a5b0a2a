#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bzone/geometry.hpp"

using namespace bzone;
using Catch::Matchers::WithinAbs;

namespace {

ConvexPolygon unit_square() {
  return ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

ConvexPolygon right_triangle() {
  return ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 0}, {0, 1}});
}

}  // namespace

TEST_CASE("orientation sign with tolerance", "[geometry]") {
  CHECK(orientation({0, 0}, {1, 0}, {1, 1}) == OrientationSign::Positive);
  CHECK(orientation({0, 0}, {1, 0}, {1, -1}) == OrientationSign::Negative);
  CHECK(orientation({0, 0}, {1, 0}, {2, 0}) == OrientationSign::Zero);
  // |det| = 2e-13 below the 1e-12 cutoff collapses to Zero; 2e-11 does not.
  CHECK(orientation({0, 0}, {2, 0}, {4, 1e-13}) == OrientationSign::Zero);
  CHECK(orientation({0, 0}, {2, 0}, {4, 1e-11}) == OrientationSign::Positive);
}

TEST_CASE("convex hull drops interior and collinear points", "[geometry]") {
  ConvexPolygon h = convex_hull(
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.25, 0.75}, {0.5, 0.0}, {1.0, 0.5}});
  REQUIRE(h.vertex_count() == 4);
  CHECK(h.vertices()[0] == Point{0, 0});
  CHECK(h.vertices()[1] == Point{1, 0});
  CHECK(h.vertices()[2] == Point{1, 1});
  CHECK(h.vertices()[3] == Point{0, 1});
  CHECK_THAT(h.area(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("convex hull degenerate inputs", "[geometry]") {
  CHECK(convex_hull({}).is_empty());
  CHECK(convex_hull({{0.5, 0.5}, {0.5, 0.5}}).is_point());
  ConvexPolygon seg = convex_hull({{0, 0}, {2, 2}, {1, 1}, {0.5, 0.5}});
  REQUIRE(seg.is_segment());
  CHECK(seg.vertices()[0] == Point{0, 0});
  CHECK(seg.vertices()[1] == Point{2, 2});
  CHECK_THAT(seg.area(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("convex hull is permutation invariant", "[geometry]") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({u(gen), u(gen)});
  const ConvexPolygon ref = convex_hull(pts);
  for (int rep = 0; rep < 20; ++rep) {
    std::shuffle(pts.begin(), pts.end(), gen);
    CHECK(convex_hull(pts) == ref);
  }
  // Idempotence: hull of hull vertices is the hull itself.
  CHECK(convex_hull(ref.vertices()) == ref);
}

TEST_CASE("from_ccw_vertices canonicalizes and validates", "[geometry]") {
  ConvexPolygon p = ConvexPolygon::from_ccw_vertices({{1, 1}, {0, 1}, {0, 0}, {1, 0}});
  CHECK(p.vertices()[0] == Point{0, 0});
  CHECK(p == unit_square());
  // Collinear middles removed.
  ConvexPolygon q =
      ConvexPolygon::from_ccw_vertices({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(q == unit_square());
  CHECK_THROWS_AS(ConvexPolygon::from_ccw_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}}),
                  std::invalid_argument);
  // Fully collinear loop degrades to the extreme segment.
  ConvexPolygon s = ConvexPolygon::from_ccw_vertices({{0, 0}, {1, 1}, {3, 3}});
  REQUIRE(s.is_segment());
  CHECK(s.vertices()[1] == Point{3, 3});
}

TEST_CASE("closed containment with boundary tolerance", "[geometry]") {
  ConvexPolygon sq = unit_square();
  CHECK(sq.contains({0.5, 0.5}));
  CHECK(sq.contains({1.0, 0.5}));
  CHECK(sq.contains({0.0, 0.0}));
  CHECK(sq.contains({1.0 + 1e-13, 0.5}));
  CHECK_FALSE(sq.contains({1.01, 0.5}));
  CHECK_FALSE(sq.contains({-0.01, 0.5}));

  ConvexPolygon seg = convex_hull({{0, 0}, {1, 1}});
  CHECK(seg.contains({0.5, 0.5}));
  CHECK_FALSE(seg.contains({0.5, 0.6}));

  ConvexPolygon pt = convex_hull({{0.25, 0.25}});
  CHECK(pt.contains({0.25, 0.25}));
  CHECK_FALSE(pt.contains({0.25, 0.26}));
  CHECK_FALSE(ConvexPolygon{}.contains({0.5, 0.5}));
}

TEST_CASE("segment distance in max norm", "[geometry]") {
  // Vertical segment at x=1 straddling the origin's y: closest value 1.
  CHECK_THAT(dist_linf_point_segment({0, 0}, {1, -1}, {1, 1}), WithinAbs(1.0, 1e-15));
  // Balanced point where |x(t)| = |y(t)| at an interior t.
  CHECK_THAT(dist_linf_point_segment({0, 0}, {2, 1}, {1, 2}), WithinAbs(1.5, 1e-15));
  CHECK_THAT(dist_linf_point_segment({0, 0}, {1, 3}, {3, 1}), WithinAbs(2.0, 1e-15));
  // Axis-parallel segment (zero direction component).
  CHECK_THAT(dist_linf_point_segment({0, 0}, {3, 0}, {3, 5}), WithinAbs(3.0, 1e-15));
  // Endpoint attains the minimum.
  CHECK_THAT(dist_linf_point_segment({5, 5}, {0, 0}, {1, 1}), WithinAbs(4.0, 1e-15));
  // Degenerate segment is a point.
  CHECK_THAT(dist_linf_point_segment({2, 1}, {0, 0}, {0, 0}), WithinAbs(2.0, 1e-15));
}

TEST_CASE("intersection and symmetric difference areas", "[geometry]") {
  ConvexPolygon a = unit_square();
  ConvexPolygon b =
      ConvexPolygon::from_ccw_vertices({{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}});
  CHECK_THAT(intersection_area(a, b), WithinAbs(0.25, 1e-12));
  CHECK_THAT(intersection_area(b, a), WithinAbs(0.25, 1e-12));
  CHECK_THAT(symmetric_difference_area(a, b), WithinAbs(1.5, 1e-12));

  // Triangles {x,y>=0, x+y<=4} and {x,y>=1, x+y<=6} overlap in a triangle of
  // legs 2 and 2: area 2.
  ConvexPolygon t1 = ConvexPolygon::from_ccw_vertices({{0, 0}, {4, 0}, {0, 4}});
  ConvexPolygon t2 = ConvexPolygon::from_ccw_vertices({{1, 1}, {5, 1}, {1, 5}});
  CHECK_THAT(intersection_area(t1, t2), WithinAbs(2.0, 1e-12));

  // Diamond |x-0.5|+|y-0.5| <= 0.7 clipped to the unit square loses four
  // corner spikes of area 0.04 each: 0.98 - 0.16 = 0.82.
  ConvexPolygon d = ConvexPolygon::from_ccw_vertices(
      {{0.5, -0.2}, {1.2, 0.5}, {0.5, 1.2}, {-0.2, 0.5}});
  CHECK_THAT(intersection_area(a, d), WithinAbs(0.82, 1e-12));

  CHECK_THAT(symmetric_difference_area(a, a), WithinAbs(0.0, 1e-12));
  CHECK_THAT(intersection_area(a, ConvexPolygon{}), WithinAbs(0.0, 1e-15));
  ConvexPolygon far =
      ConvexPolygon::from_ccw_vertices({{5, 5}, {6, 5}, {6, 6}, {5, 6}});
  CHECK_THAT(intersection_area(a, far), WithinAbs(0.0, 1e-15));
}

TEST_CASE("max norm fattening and thinning of the unit square", "[geometry]") {
  ConvexPolygon sq = unit_square();
  ConvexPolygon fat = fatten_linf(sq, 0.1);
  REQUIRE(fat.vertex_count() == 4);
  CHECK(fat.vertices()[0] == Point{-0.1, -0.1});
  CHECK_THAT(fat.area(), WithinAbs(1.44, 1e-12));

  ConvexPolygon thin = thin_linf(sq, 0.1);
  REQUIRE(thin.vertex_count() == 4);
  CHECK_THAT(thin.area(), WithinAbs(0.64, 1e-12));
  CHECK(thin.contains({0.1, 0.1}));
  CHECK(thin.contains({0.9, 0.9}));
  CHECK_FALSE(thin.contains({0.099, 0.5}));

  CHECK(thin_linf(sq, 0.6).is_empty());
  CHECK(thin_linf(convex_hull({{0, 0}, {1, 1}}), 0.01).is_empty());
  CHECK_THROWS_AS(fatten_linf(sq, -0.1), std::invalid_argument);
}

TEST_CASE("thinning shifts oblique edges by the right support value", "[geometry]") {
  // Eroding {x>=0, y>=0, x+y<=1} by delta=0.1 in max norm gives
  // {x>=0.1, y>=0.1, x+y<=0.8}: area 0.18.
  ConvexPolygon thin = thin_linf(right_triangle(), 0.1);
  REQUIRE(thin.vertex_count() == 3);
  CHECK_THAT(thin.area(), WithinAbs(0.18, 1e-12));
  CHECK(thin.contains({0.1, 0.1}));
  CHECK(thin.contains({0.7, 0.1}));
  CHECK_FALSE(thin.contains({0.71, 0.1}));
}

TEST_CASE("fatten and thin sandwich the set and have bounded gap", "[geometry]") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Point> pts;
    const int n = 3 + static_cast<int>(gen() % 10);
    for (int i = 0; i < n; ++i) pts.push_back({u(gen), u(gen)});
    ConvexPolygon s = convex_hull(pts);
    if (s.vertex_count() < 3) continue;
    const double delta = 0.005 + 0.095 * u(gen);
    auto [fat, thin] = fatten_thin(s, delta);
    for (const Point& v : s.vertices()) CHECK(fat.contains(v));
    for (const Point& v : thin.vertices()) CHECK(s.contains(v));
    // For convex subsets of the unit square the fattened-minus-thinned shell
    // has measure at most 8*delta + 4*delta^2 (mixed-volume monotonicity).
    const double shell = fat.area() - thin.area();
    CHECK(shell <= 8.0 * delta + 4.0 * delta * delta + 1e-9);
    CHECK(shell >= 0.0);
  }
}

TEST_CASE("point to polygon distance in max norm", "[geometry]") {
  ConvexPolygon sq = unit_square();
  CHECK_THAT(dist_linf_point_polygon({0.5, 0.5}, sq), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dist_linf_point_polygon({2.0, 0.5}, sq), WithinAbs(1.0, 1e-12));
  CHECK_THAT(dist_linf_point_polygon({-0.3, -0.4}, sq), WithinAbs(0.4, 1e-12));
  CHECK_THAT(dist_linf_point_polygon({0.5, 1.7}, sq), WithinAbs(0.7, 1e-12));
  CHECK_THROWS_AS(dist_linf_point_polygon({0, 0}, ConvexPolygon{}), std::invalid_argument);
}

TEST_CASE("Hausdorff distance in max norm", "[geometry]") {
  ConvexPolygon sq = unit_square();
  ConvexPolygon inner =
      ConvexPolygon::from_ccw_vertices({{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
  CHECK_THAT(hausdorff_linf(sq, inner), WithinAbs(0.25, 1e-12));
  CHECK_THAT(hausdorff_linf(inner, sq), WithinAbs(0.25, 1e-12));
  // Square vs inscribed right triangle: the far corner (1,1) is 0.5 away
  // from the hypotenuse in max norm.
  CHECK_THAT(hausdorff_linf(sq, right_triangle()), WithinAbs(0.5, 1e-12));
  CHECK_THAT(hausdorff_linf(sq, sq), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(hausdorff_linf(sq, ConvexPolygon{}), std::invalid_argument);

  // Fattening moves the boundary out by exactly delta.
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Point> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({u(gen), u(gen)});
    ConvexPolygon s = convex_hull(pts);
    if (s.vertex_count() < 3) continue;
    const double delta = 0.01 + 0.2 * u(gen);
    CHECK_THAT(hausdorff_linf(fatten_linf(s, delta), s), WithinAbs(delta, 1e-10));
  }
}
