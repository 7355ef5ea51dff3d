#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "expdist/errors.hpp"
#include "expdist/inequality.hpp"
#include "test_support.hpp"

using namespace expdist;
using testsupport::rural_fixture;
using testsupport::urban_fixture;

namespace {

GroupedSample grouped(const std::vector<double>& limits, const std::vector<double>& means,
                      const std::vector<long>& freqs) {
  GroupedSample sample;
  sample.unit = Unit::person;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    ExpenditureClass cls;
    cls.lower = limits[i];
    cls.upper = i + 1 == freqs.size() ? std::numeric_limits<double>::infinity() : limits[i + 1];
    cls.class_mean = means[i];
    cls.freq_persons = cls.freq_households = freqs[i];
    sample.classes.push_back(cls);
  }
  return sample;
}

// step Lorenz curve implied by a raw sample: P_i = i/n, Q_i = S_i/S_n
LorenzCurve step_lorenz(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  LorenzCurve curve;
  curve.P.push_back(0.0);
  curve.Q.push_back(0.0);
  double total = 0.0;
  for (double v : values) total += v;
  double cum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    cum += values[i];
    curve.P.push_back(static_cast<double>(i + 1) / static_cast<double>(values.size()));
    curve.Q.push_back(cum / total);
  }
  return curve;
}

}  // namespace

TEST_CASE("all mass in one class is perfect equality") {
  const GroupedSample sample = grouped({0, 100, 200}, {50, 150, 250}, {0, 1000, 0});
  const LorenzCurve curve = lorenz_from_grouped(sample, Unit::person);
  CHECK(gini_from_lorenz(curve).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hand-computed two-class lorenz points") {
  // p = (0.5, 0.5), means (1, 3): aggregate 2, Q = (0.25, 1.0)
  const GroupedSample sample = grouped({0, 2, 2.5}, {1, 2.2, 3}, {500, 0, 500});
  const LorenzCurve curve = lorenz_from_grouped(sample, Unit::person);
  REQUIRE(curve.P.size() == 4);
  CHECK(curve.P[1] == doctest::Approx(0.5));
  CHECK(curve.Q[1] == doctest::Approx(0.25));
  CHECK(curve.P[3] == 1.0);
  CHECK(curve.Q[3] == 1.0);
}

TEST_CASE("table II person lorenz curve ends at (1,1) with 12 classes") {
  const LorenzCurve curve = lorenz_from_grouped(rural_fixture(Unit::person), Unit::person);
  REQUIRE(curve.P.size() == 13);  // (0,0) prepended
  CHECK(curve.P.back() == 1.0);
  CHECK(curve.Q.back() == 1.0);
  for (std::size_t i = 0; i < curve.P.size(); ++i) {
    CHECK(curve.Q[i] <= curve.P[i] + 1e-12);  // below the egalitarian line
    if (i > 0) {
      CHECK(curve.P[i] >= curve.P[i - 1]);
      CHECK(curve.Q[i] >= curve.Q[i - 1]);
    }
  }
}

TEST_CASE("grouped gini reproduces table XI 2006-07") {
  CHECK(gini_from_lorenz(lorenz_from_grouped(rural_fixture(Unit::person), Unit::person)).value ==
        doctest::Approx(28.45).epsilon(0.1 / 28.45));
  CHECK(gini_from_lorenz(lorenz_from_grouped(rural_fixture(Unit::household), Unit::household))
            .value == doctest::Approx(29.28).epsilon(0.1 / 29.28));
  CHECK(gini_from_lorenz(lorenz_from_grouped(urban_fixture(Unit::person), Unit::person)).value ==
        doctest::Approx(36.36).epsilon(0.1 / 36.36));
  CHECK(gini_from_lorenz(lorenz_from_grouped(urban_fixture(Unit::household), Unit::household))
            .value == doctest::Approx(36.90).epsilon(0.1 / 36.90));
}

TEST_CASE("egalitarian curve has zero gini") {
  LorenzCurve curve;
  curve.P = {0.0, 1.0};
  curve.Q = {0.0, 1.0};
  CHECK(gini_from_lorenz(curve).value == 0.0);
}

TEST_CASE("pairwise gini basics") {
  CHECK(gini_pairwise(std::vector<double>{3.0, 3.0, 3.0, 3.0}).value ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gini_pairwise(std::vector<double>{0.0, 1.0}).value == doctest::Approx(50.0));
  CHECK_THROWS_AS(gini_pairwise(std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(gini_pairwise(std::vector<double>{0.0, 0.0, 0.0}), Error);
}

TEST_CASE("sorted formula equals the brute-force double sum") {
  RandomStream rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> values(200);
    for (double& v : values) v = std::pow(rng.uniform01(), -0.7);  // heavy-ish tail
    const double fast = gini_pairwise(values).value;
    const double brute = testsupport::brute_force_gini_percent(values);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-11));
  }
}

TEST_CASE("pairwise gini equals the step-lorenz trapezoid value") {
  RandomStream rng(23);
  std::vector<double> values(200);
  for (double& v : values) v = 1.0 + 40.0 * rng.uniform01() * rng.uniform01();
  const double pairwise = gini_pairwise(values).value;
  const double lorenz = gini_from_lorenz(step_lorenz(values)).value;
  CHECK(pairwise == doctest::Approx(lorenz).epsilon(1e-9 / 100.0));
}

TEST_CASE("gini is scale invariant") {
  RandomStream rng(31);
  std::vector<double> values(500);
  for (double& v : values) v = 2.0 + rng.uniform01();
  const double base = gini_pairwise(values).value;
  for (double c : {0.001, 3.7, 1e6}) {
    std::vector<double> scaled = values;
    for (double& v : scaled) v *= c;
    CHECK(gini_pairwise(scaled).value == doctest::Approx(base).epsilon(1e-12));
  }
  CHECK(base >= 0.0);
  CHECK(base < 100.0);
}

TEST_CASE("grouped trapezoid is a lower bound for any sample consistent with the grouping") {
  const DistributionSpec spec{MixtureParams{400.0, 0.25, 1.9, 800.0, 0.2}};
  const auto draws = sample(spec, 20000, 5);
  const double pairwise = gini_pairwise(draws).value;

  // bin the draws, set class means from the data itself
  const std::vector<double> limits = {0, 200, 350, 500, 700, 900, 1200, 1700};
  GroupedSample binned;
  binned.unit = Unit::person;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    ExpenditureClass cls;
    cls.lower = limits[i];
    cls.upper = i + 1 == limits.size() ? std::numeric_limits<double>::infinity() : limits[i + 1];
    double sum = 0.0;
    long count = 0;
    for (double v : draws)
      if (v >= cls.lower && (cls.open_top() || v < cls.upper)) {
        sum += v;
        ++count;
      }
    cls.class_mean = count > 0 ? sum / static_cast<double>(count) : 0.5 * (cls.lower + cls.lower + 1);
    cls.freq_persons = cls.freq_households = count;
    binned.classes.push_back(cls);
  }
  const double grouped_gini =
      gini_from_lorenz(lorenz_from_grouped(binned, Unit::person)).value;
  CHECK(grouped_gini <= pairwise);
}

TEST_CASE("top share of a near-degenerate distribution equals the fraction") {
  const DistributionSpec spiky{LognormalParams{100.0, 1e-14}};
  CHECK(top_share(spiky, 0.10, 20000, 3) == doctest::Approx(0.10).epsilon(1e-6));
  CHECK(top_share(spiky, 0.20, 20000, 3) == doctest::Approx(0.20).epsilon(1e-6));
}

TEST_CASE("undefined means are rejected") {
  const DistributionSpec heavy{MixtureParams{1.0, 0.178, 0.9, 1.0, 0.35}};
  CHECK_THROWS_AS(top_share(heavy, 0.1, 100, 1), Error);
  CHECK_THROWS_AS(simulation_gini(heavy, 100, 1), Error);
}

TEST_CASE("simulation gini is deterministic and sane at small n") {
  const DistributionSpec spec{MixtureParams{1.0, 0.178, 1.5, 1.0, 0.3538}};
  const GiniEstimate a = simulation_gini(spec, 50000, 12);
  const GiniEstimate b = simulation_gini(spec, 50000, 12);
  CHECK(a.value == b.value);
  CHECK(a.method == GiniMethod::pairwise_sample);
  CHECK(a.value > 30.0);
  CHECK(a.value < 60.0);
}
