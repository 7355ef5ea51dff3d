#pragma once

#include <cstdint>
#include <vector>

#include "expdist/distributions.hpp"
#include "expdist/grouped_data.hpp"

namespace expdist {

enum class Statistic { ks, chi2 };

const char* statistic_name(Statistic statistic);
Statistic statistic_from_name(const std::string& name);

// D = max over interior class limits of |ECDF(z_i) - F(z_i)| with
// ECDF(z_i) = cumulative frequency through class i / 1000.
double ks_grouped(const GroupedSample& sample, const DistributionSpec& spec, Unit unit);

// Chi-square of the observed frequencies against expected_class_counts.
double chi2_grouped(const GroupedSample& sample, const DistributionSpec& spec, Unit unit);

struct GofReport {
  Statistic statistic = Statistic::ks;
  double observed_value = 0.0;
  double p_value = 0.0;
  int replicates = 0;
  int mc_sample_size = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultReplicates = 1000;
inline constexpr int kMcSampleSize = 1000;

// Null distribution of the statistic: each replicate draws mc_sample_size
// observations from spec, bins them into the sample's class limits (draws
// beyond the top limit fall in the open top class), and evaluates the
// statistic of the synthetic grouped table against spec. Replicate r uses a
// generator derived from (seed, r), so results do not depend on scheduling.
std::vector<double> mc_null_statistics(const GroupedSample& sample, const DistributionSpec& spec,
                                       Unit unit, Statistic statistic, int replicates,
                                       std::uint64_t seed, int mc_sample_size = kMcSampleSize);

// p = fraction of replicates with statistic strictly greater than observed
// (ties count as not exceeding).
GofReport mc_pvalue(const GroupedSample& sample, const DistributionSpec& spec, Unit unit,
                    Statistic statistic, int replicates, std::uint64_t seed);

// Same machinery with a caller-supplied observed value (e.g. a published
// statistic re-tested against this null).
GofReport mc_pvalue_of_observed(const GroupedSample& sample, const DistributionSpec& spec,
                                Unit unit, Statistic statistic, double observed_value,
                                int replicates, std::uint64_t seed);

}  // namespace expdist
