#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "expdist/errors.hpp"
#include "expdist/gof.hpp"
#include "expdist/estimation.hpp"
#include "test_support.hpp"

using namespace expdist;
using testsupport::rural_fixture;
using testsupport::urban_fixture;

namespace {

const MixtureParams kRuralHousehold{553.355, 0.143, 1.760, 849.414, 0.169};
const MixtureParams kUrbanPerson{888.914, 0.249, 1.557, 1698.828, 0.138};

GroupedSample sample_matching(const DistributionSpec& spec, const std::vector<long>& counts) {
  GroupedSample sample;
  sample.unit = Unit::person;
  double cum = 0.0, lower = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    ExpenditureClass cls;
    cls.lower = lower;
    cum += static_cast<double>(counts[i]);
    cls.upper = i + 1 == counts.size() ? std::numeric_limits<double>::infinity()
                                       : quantile(spec, cum / 1000.0);
    cls.class_mean = cls.open_top() ? cls.lower * 1.5 : 0.5 * (cls.lower + cls.upper);
    cls.freq_persons = counts[i];
    cls.freq_households = counts[i];
    sample.classes.push_back(cls);
    lower = cls.upper;
  }
  return sample;
}

}  // namespace

TEST_CASE("ks is zero when expected counts equal observed") {
  const DistributionSpec spec{MixtureParams{300.0, 0.25, 1.8, 500.0, 0.2}};
  const GroupedSample sample =
      sample_matching(spec, {100, 150, 200, 200, 150, 100, 50, 30, 20});
  CHECK(ks_grouped(sample, spec, Unit::person) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ks at published parameters reproduces tables VI/VII") {
  const double rh = ks_grouped(rural_fixture(Unit::household),
                               DistributionSpec{kRuralHousehold}, Unit::household);
  CHECK(std::fabs(rh - 0.0095) <= 0.003);
  const double up = ks_grouped(urban_fixture(Unit::person), DistributionSpec{kUrbanPerson},
                               Unit::person);
  CHECK(std::fabs(up - 0.0069) <= 0.003);
}

TEST_CASE("an observed statistic of zero gives p = 1") {
  const DistributionSpec spec{LognormalParams{100.0, 0.3}};
  const GroupedSample sample = sample_matching(spec, {250, 250, 250, 250});
  const GofReport report =
      mc_pvalue_of_observed(sample, spec, Unit::person, Statistic::ks, 0.0, 200, 5);
  CHECK(report.p_value == 1.0);
}

TEST_CASE("published double-pareto KS values are firmly rejected by the null") {
  // Table VIII reports KS = 0.42 (1983) and 0.38 (2006-07) for urban
  // households; replicate statistics never come close at n = 1000.
  const GroupedSample uh = urban_fixture(Unit::household);
  const FitResult dp = fit_chi2(uh, Family::double_pareto, Unit::household);
  for (double observed : {0.42, 0.38}) {
    const GofReport report = mc_pvalue_of_observed(uh, dp.spec, Unit::household, Statistic::ks,
                                                   observed, 500, 11);
    CHECK(report.p_value < 0.02);
  }
}

TEST_CASE("p-value is nonincreasing in the observed value at a fixed seed") {
  const GroupedSample rh = rural_fixture(Unit::household);
  const DistributionSpec spec{kRuralHousehold};
  double prev = 1.1;
  for (double observed : {0.002, 0.008, 0.015, 0.03, 0.08}) {
    const GofReport report = mc_pvalue_of_observed(rh, spec, Unit::household, Statistic::ks,
                                                   observed, 400, 123);
    CHECK(report.p_value <= prev);
    prev = report.p_value;
  }
}

TEST_CASE("mc p-values are deterministic in the seed") {
  const GroupedSample rh = rural_fixture(Unit::household);
  const DistributionSpec spec{kRuralHousehold};
  const GofReport a = mc_pvalue(rh, spec, Unit::household, Statistic::ks, 300, 77);
  const GofReport b = mc_pvalue(rh, spec, Unit::household, Statistic::ks, 300, 77);
  CHECK(a.p_value == b.p_value);
  CHECK(a.observed_value == b.observed_value);
}

TEST_CASE("chi2 p-values run through the same machinery") {
  const GroupedSample rh = rural_fixture(Unit::household);
  const DistributionSpec spec{kRuralHousehold};
  const GofReport report = mc_pvalue(rh, spec, Unit::household, Statistic::chi2, 400, 9);
  CHECK(report.statistic == Statistic::chi2);
  CHECK(report.p_value > 0.9);  // the published fit is good
  CHECK(report.observed_value == doctest::Approx(3.6399).epsilon(1e-3));
}

TEST_CASE("null statistics exclude scheduling effects: replicate r depends only on (seed, r)") {
  const GroupedSample rh = rural_fixture(Unit::household);
  const DistributionSpec spec{kRuralHousehold};
  const auto long_run = mc_null_statistics(rh, spec, Unit::household, Statistic::ks, 50, 31);
  const auto short_run = mc_null_statistics(rh, spec, Unit::household, Statistic::ks, 10, 31);
  for (std::size_t i = 0; i < short_run.size(); ++i) CHECK(short_run[i] == long_run[i]);
}

TEST_CASE("p-values are roughly uniform under the null") {
  // data simulated from the spec itself; over 200 trials the fraction of
  // p-values below 0.1 stays within [0.04, 0.18]
  const DistributionSpec spec{MixtureParams{400.0, 0.2, 1.9, 700.0, 0.2}};
  const GroupedSample geometry =
      sample_matching(spec, {80, 120, 150, 170, 150, 120, 90, 60, 40, 20});
  const std::vector<double> limits = geometry.interior_limits();

  int below = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    // draw a fresh grouped data set from the spec
    const auto draws = sample(spec, 1000, 1000 + static_cast<std::uint64_t>(t));
    GroupedSample data = geometry;
    long cum_prev = 0;
    for (std::size_t i = 0; i < limits.size(); ++i) {
      const long cum = static_cast<long>(
          std::count_if(draws.begin(), draws.end(), [&](double x) { return x <= limits[i]; }));
      data.classes[i].freq_persons = cum - cum_prev;
      cum_prev = cum;
    }
    data.classes.back().freq_persons = 1000 - cum_prev;
    const GofReport report =
        mc_pvalue(data, spec, Unit::person, Statistic::ks, 200, 555 + static_cast<std::uint64_t>(t));
    if (report.p_value < 0.1) ++below;
  }
  const double fraction = static_cast<double>(below) / trials;
  CHECK(fraction >= 0.04);
  CHECK(fraction <= 0.18);
}

TEST_CASE("gof input validation") {
  const GroupedSample rh = rural_fixture(Unit::household);
  const DistributionSpec spec{kRuralHousehold};
  CHECK_THROWS_AS(mc_pvalue(rh, spec, Unit::household, Statistic::ks, 50, 1), Error);
  CHECK_THROWS_AS(
      ks_grouped(rh, DistributionSpec{MixtureParams{1.0, -0.1, 1.0, 1.0, 0.5}}, Unit::household),
      Error);
}
