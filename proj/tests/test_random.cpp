#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bzone/random.hpp"

using namespace bzone;
using Catch::Matchers::WithinAbs;

TEST_CASE("identical seeds reproduce the stream", "[random]") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform01();
    all_equal = all_equal && (x == b.uniform01());
    any_diff = any_diff || (x != c.uniform01());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("split seeds give distinct reproducible children", "[random]") {
  CHECK(split_seed(7, 0) == split_seed(7, 0));
  CHECK(split_seed(7, 0) != split_seed(7, 1));
  CHECK(split_seed(7, 1) != split_seed(8, 1));
  // Children are usable out of order.
  std::vector<std::uint64_t> forward, backward;
  for (int k = 0; k < 16; ++k) forward.push_back(split_seed(99, k));
  for (int k = 15; k >= 0; --k) backward.push_back(split_seed(99, k));
  for (int k = 0; k < 16; ++k) CHECK(forward[k] == backward[15 - k]);
}

TEST_CASE("uniform01 range and moments", "[random]") {
  Rng rng(1);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  CHECK_THAT(mean, WithinAbs(0.5, 0.005));
  CHECK_THAT(sumsq / n - mean * mean, WithinAbs(1.0 / 12.0, 0.005));
}

TEST_CASE("normal draws match N(0,1)", "[random]") {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  int below1 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
    if (z < 1.0) ++below1;
  }
  CHECK_THAT(sum / n, WithinAbs(0.0, 0.01));
  CHECK_THAT(sumsq / n, WithinAbs(1.0, 0.02));
  CHECK_THAT(static_cast<double>(below1) / n, WithinAbs(0.841345, 0.005));
}

TEST_CASE("noise laws are mean zero, variance one", "[random]") {
  const int n = 200000;
  for (NoiseLaw law :
       {NoiseLaw::Gaussian, NoiseLaw::ShiftedExponential, NoiseLaw::StudentT5}) {
    Rng rng(3);
    double sum = 0.0, sumsq = 0.0, mn = 1e9;
    for (int i = 0; i < n; ++i) {
      const double e = rng.noise(law);
      sum += e;
      sumsq += e * e;
      mn = std::min(mn, e);
    }
    CHECK_THAT(sum / n, WithinAbs(0.0, 0.02));
    CHECK_THAT(sumsq / n, WithinAbs(1.0, 0.05));
    if (law == NoiseLaw::ShiftedExponential) CHECK(mn >= -1.0);
  }
}

TEST_CASE("t5 noise is heavy tailed", "[random]") {
  Rng rng(4);
  const int n = 200000;
  double sum4 = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = rng.noise(NoiseLaw::StudentT5);
    sum2 += e * e;
    sum4 += e * e * e * e;
  }
  const double kurt = (sum4 / n) / ((sum2 / n) * (sum2 / n));
  CHECK(kurt > 4.0);  // t5 kurtosis is 9; Gaussian is 3
}

TEST_CASE("noise law names round trip", "[random]") {
  for (NoiseLaw law :
       {NoiseLaw::Gaussian, NoiseLaw::ShiftedExponential, NoiseLaw::StudentT5})
    CHECK(parse_noise_law(noise_law_name(law)) == law);
  CHECK_THROWS_AS(parse_noise_law("cauchy"), std::invalid_argument);
}
