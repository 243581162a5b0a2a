#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bzone/rate_study.hpp"

using namespace bzone;

namespace {

RateStudySpec tiny_dose_spec() {
  RateStudySpec spec;
  spec.setting = Setting::DoseResponse;
  spec.scene = disc_scene(1.0, 0.25);
  spec.budgets = {{40, 30}, {90, 45}, {200, 68}};
  spec.replications = 20;
  spec.seed = 314;
  return spec;
}

}  // namespace

TEST_CASE("budget presets", "[rate_study]") {
  const auto dose = dose_budgets({100, 200}, 1.0);
  REQUIRE(dose.size() == 2);
  CHECK(dose[0].n == 100);
  CHECK(dose[0].m == 464);  // round(100^{4/3})
  CHECK(dose[1].m == 1170);  // round(200^{4/3})
  const auto reg = regression_budgets({50, 80});
  CHECK(reg[0].m == 50);
  CHECK(reg[0].n == 2500);
  CHECK(reg[1].n == 6400);
}

TEST_CASE("spec validation", "[rate_study]") {
  RateStudySpec spec = tiny_dose_spec();
  CHECK_NOTHROW(spec.validate());

  RateStudySpec two = spec;
  two.budgets.pop_back();
  CHECK_THROWS_WITH(two.validate(), Catch::Matchers::ContainsSubstring(">= 3 budget levels"));

  RateStudySpec few = spec;
  few.replications = 19;
  CHECK_THROWS_WITH(few.validate(), Catch::Matchers::ContainsSubstring(">= 20 replications"));

  RateStudySpec bad = spec;
  bad.budgets[1].m = 0;
  CHECK_THROWS(bad.validate());

  RateStudySpec raw = spec;
  raw.scene = GroundTruthScene{};  // not finalized
  CHECK_THROWS_WITH(raw.validate(), Catch::Matchers::ContainsSubstring("not finalized"));
}

TEST_CASE("quantiles interpolate linearly", "[rate_study]") {
  const std::vector<double> v{1.0, 2.0, 4.0, 8.0};
  CHECK(ratedetail::quantile_sorted(v, 0.0) == 1.0);
  CHECK(ratedetail::quantile_sorted(v, 1.0) == 8.0);
  CHECK(ratedetail::quantile_sorted(v, 0.5) == 3.0);
  CHECK(ratedetail::quantile_sorted(v, 0.25) == 1.75);
  CHECK_THROWS(ratedetail::quantile_sorted({}, 0.5));
}

TEST_CASE("slope fit recovers exact log-linear laws", "[rate_study]") {
  const std::vector<double> xs{100.0, 200.0, 400.0, 800.0};
  std::vector<double> med(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) med[i] = 3.0 * std::pow(xs[i], -0.5);
  CHECK_THAT(ratedetail::log_median_slope(xs, med), Catch::Matchers::WithinAbs(-0.5, 1e-12));
  // zero medians clamp instead of producing -inf
  CHECK(std::isfinite(ratedetail::log_median_slope(xs, {0.1, 0.0, 0.0, 0.0})));
  CHECK_THROWS(ratedetail::ls_slope({1.0, 1.0}, {2.0, 3.0}));
}

TEST_CASE("dose study runs and is reproducible across worker counts", "[rate_study]") {
  RateStudySpec spec = tiny_dose_spec();
  const RateStudyResult one = run_rate_study(spec);

  REQUIRE(one.rows.size() == 3);
  for (const RateRow& row : one.rows) {
    CHECK(row.median_d >= 0.0);
    CHECK(row.q25 <= row.median_d);
    CHECK(row.median_d <= row.q75);
  }
  CHECK(std::isfinite(one.slope));
  CHECK(one.slope_lo <= one.slope_hi);
  CHECK(one.errors.size() == 3);
  CHECK(one.errors[0].size() == 20);
  CHECK(std::is_sorted(one.errors[2].begin(), one.errors[2].end()));

  // error medians shrink with budget on this preset
  CHECK(one.rows.back().median_d < one.rows.front().median_d);
  CHECK(one.slope < 0.0);

  spec.workers = 3;
  const RateStudyResult three = run_rate_study(spec);
  CHECK(three.slope == one.slope);
  for (std::size_t i = 0; i < one.errors.size(); ++i)
    for (std::size_t r = 0; r < one.errors[i].size(); ++r)
      CHECK(three.errors[i][r] == one.errors[i][r]);

  // same seed, same result (full determinism)
  const RateStudyResult again = run_rate_study(tiny_dose_spec());
  CHECK(again.slope == one.slope);
  CHECK(again.rows[1].median_d == one.rows[1].median_d);

  const std::string csv = rate_study_to_csv(spec, one);
  CHECK(csv.find("m,n,x,median_d,q25,q75") != std::string::npos);
  CHECK(csv.find("setting=dose-response") != std::string::npos);

  const int inc = monotone_increases(one);
  CHECK(inc <= 1);
}

TEST_CASE("estimated tau deviations are recorded", "[rate_study]") {
  RateStudySpec spec = tiny_dose_spec();
  spec.tau_mode = TauMode::Init;
  spec.replications = 20;
  const RateStudyResult res = run_rate_study(spec);
  bool any = false;
  for (const auto& level : res.tau_devs)
    for (double v : level) any = any || v > 0.0;
  CHECK(any);
}

TEST_CASE("setting and tau mode names round trip", "[rate_study]") {
  CHECK(parse_setting("dose") == Setting::DoseResponse);
  CHECK(parse_setting(setting_name(Setting::Regression)) == Setting::Regression);
  CHECK_THROWS(parse_setting("banana"));
  CHECK(parse_tau_mode(tau_mode_name(TauMode::Iterative)) == TauMode::Iterative);
  CHECK_THROWS(parse_tau_mode(""));
}
