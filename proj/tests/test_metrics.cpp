#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "bzone/metrics.hpp"

using bzone::ConvexPolygon;
using bzone::Design;
using bzone::GroundTruthScene;
using bzone::Point;
using Catch::Matchers::WithinAbs;

namespace {

ConvexPolygon axis_box(double x0, double y0, double x1, double y1) {
  return ConvexPolygon::from_ccw_vertices({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

GroundTruthScene poly_scene(ConvexPolygon s0, Design design = Design::uniform()) {
  GroundTruthScene scene;
  scene.s0 = std::move(s0);
  scene.sigma0 = 0.5;
  scene.design = std::move(design);
  scene.finalize();
  return scene;
}

ConvexPolygon random_hull(std::uint64_t seed, int n) {
  bzone::Rng rng(seed);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
  return ConvexPolygon::hull_of(std::move(pts));
}

}  // namespace

TEST_CASE("symmetric difference against the true zone", "[metrics]") {
  const double pi = 3.14159265358979323846;
  const auto scene = bzone::disc_scene(1.0, 0.5);  // r = 0.25 centered disc

  SECTION("unit square leaves 1 - pi/16") {
    const auto frame = axis_box(0.0, 0.0, 1.0, 1.0);
    CHECK_THAT(bzone::metric_d(frame, scene), WithinAbs(1.0 - pi / 16.0, 1e-5));
  }

  SECTION("the zone itself is at distance zero") {
    CHECK(bzone::metric_d(scene.s0_poly, scene) <= 1e-9);
  }

  SECTION("the empty estimate misses the whole zone") {
    CHECK(bzone::metric_d(ConvexPolygon{}, scene) == scene.s0_poly.area());
  }

  SECTION("polygonization defect is positive and tiny for the disc") {
    const double defect = bzone::polygonization_defect(scene);
    CHECK(defect > 0.0);
    CHECK(defect < 1e-4 * 0.25 * 0.25);
    CHECK(bzone::polygonization_defect(poly_scene(axis_box(0.3, 0.3, 0.7, 0.7))) == 0.0);
  }
}

TEST_CASE("design distance matches the exact distance under the uniform design",
          "[metrics]") {
  const auto scene = bzone::disc_scene(1.0, 0.5);
  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    const auto est = random_hull(seed, 8);
    const auto df = bzone::metric_dF(est, scene, 100);  // budget ignored when exact
    CHECK(df.exact);
    CHECK(df.se == 0.0);
    CHECK(df.value == bzone::metric_d(est, scene));
  }
}

TEST_CASE("design distance weights the discrepancy by the density", "[metrics]") {
  // 2x2 grid with the x < 1/2 cells carrying twice the mass: density is 4/3
  // on the left half and 2/3 on the right half.
  const auto left_doubled = Design::density_grid(2, {2.0, 2.0, 1.0, 1.0});

  SECTION("discrepancy inside the heavy half") {
    const auto scene = poly_scene(axis_box(0.3, 0.3, 0.45, 0.7), left_doubled);
    const auto est = axis_box(0.25, 0.3, 0.45, 0.7);
    CHECK_THAT(bzone::metric_d(est, scene), WithinAbs(0.02, 1e-12));
    const auto df = bzone::metric_dF(est, scene, 1000000, 77);
    CHECK_FALSE(df.exact);
    CHECK(df.se > 0.0);
    CHECK(df.se < 1e-3);
    CHECK_THAT(df.value, WithinAbs(4.0 / 3.0 * 0.02, 1e-3));
    CHECK_THAT(df.value, WithinAbs(4.0 / 3.0 * 0.02, 4.5 * df.se));
  }

  SECTION("discrepancy inside the light half") {
    const auto scene = poly_scene(axis_box(0.55, 0.3, 0.7, 0.7), left_doubled);
    const auto est = axis_box(0.5, 0.3, 0.7, 0.7);
    const auto df = bzone::metric_dF(est, scene, 1000000, 78);
    CHECK_THAT(df.value, WithinAbs(2.0 / 3.0 * 0.02, 1e-3));
    CHECK_THAT(df.value, WithinAbs(2.0 / 3.0 * 0.02, 4.5 * df.se));
  }

  SECTION("fixed seed reproduces, zero budget refuses") {
    const auto scene = poly_scene(axis_box(0.3, 0.3, 0.45, 0.7), left_doubled);
    const auto est = axis_box(0.25, 0.3, 0.45, 0.7);
    const auto a = bzone::metric_dF(est, scene, 20000, 5);
    const auto b = bzone::metric_dF(est, scene, 20000, 5);
    CHECK(a.value == b.value);
    CHECK_THROWS_AS(bzone::metric_dF(est, scene, 0, 5), std::invalid_argument);
  }
}

TEST_CASE("Hausdorff distance to the true zone", "[metrics]") {
  const auto scene = bzone::disc_scene(1.0, 0.5);

  SECTION("zero on the zone itself") {
    const auto h = bzone::metric_hausdorff(scene.s0_poly, scene);
    CHECK_FALSE(h.empty_estimate);
    CHECK(h.value == 0.0);
  }

  SECTION("fattening by delta moves the distance to delta") {
    const auto fat = bzone::fatten_linf(scene.s0_poly, 0.1);
    CHECK_THAT(bzone::metric_hausdorff(fat, scene).value, WithinAbs(0.1, 1e-9));
  }

  SECTION("empty estimate is flagged and sent to infinity") {
    const auto h = bzone::metric_hausdorff(ConvexPolygon{}, scene);
    CHECK(h.empty_estimate);
    CHECK(std::isinf(h.value));
  }

  SECTION("agrees with the symmetric two-sided distance on random hulls") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      const auto a = random_hull(seed, 7);
      const auto b = random_hull(seed + 1000, 7);
      CHECK(bzone::hausdorff_linf(a, b) == bzone::hausdorff_linf(b, a));
      CHECK(bzone::metric_hausdorff(a, scene).value ==
            bzone::hausdorff_linf(a, scene.s0_poly));
    }
  }
}

TEST_CASE("all distances vanish exactly on the true zone and only there", "[metrics]") {
  const auto scene = poly_scene(axis_box(0.3, 0.3, 0.7, 0.7));

  const auto exact = scene.s0_poly;
  CHECK(bzone::metric_d(exact, scene) <= 1e-9);
  CHECK(bzone::metric_dF(exact, scene).value <= 1e-9);
  CHECK(bzone::metric_hausdorff(exact, scene).value <= 1e-9);

  const auto shifted = axis_box(0.31, 0.3, 0.71, 0.7);
  CHECK(bzone::metric_d(shifted, scene) > 1e-3);
  CHECK(bzone::metric_dF(shifted, scene).value > 1e-3);
  CHECK(bzone::metric_hausdorff(shifted, scene).value > 1e-3);
}
