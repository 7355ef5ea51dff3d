#include "expdist/gof.hpp"

#include <algorithm>
#include <cmath>

#include "expdist/errors.hpp"
#include "expdist/estimation.hpp"
#include "expdist/kernels.hpp"

namespace expdist {

const char* statistic_name(Statistic statistic) {
  return statistic == Statistic::ks ? "KS" : "chi2";
}

Statistic statistic_from_name(const std::string& name) {
  if (name == "ks" || name == "KS") return Statistic::ks;
  if (name == "chi2") return Statistic::chi2;
  raise(Errc::bad_input, "unknown statistic '" + name + "' (ks|chi2)");
}

double ks_grouped(const GroupedSample& sample, const DistributionSpec& spec, Unit unit) {
  validate_params(spec);
  const std::vector<double> limits = sample.interior_limits();
  double d = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    cum += static_cast<double>(sample.classes[i].freq(unit));
    d = std::max(d, std::fabs(cum / 1000.0 - cdf(spec, limits[i])));
  }
  return d;
}

double chi2_grouped(const GroupedSample& sample, const DistributionSpec& spec, Unit unit) {
  std::vector<double> observed;
  observed.reserve(sample.classes.size());
  for (const auto& cls : sample.classes)
    observed.push_back(static_cast<double>(cls.freq(unit)));
  return chi2_statistic(observed, expected_class_counts(spec, sample, unit));
}

namespace {

struct NullContext {
  std::vector<double> limits;       // interior class limits
  std::vector<double> model_cdf;    // F at the limits
  std::vector<double> expected;     // expected counts per class (chi2 only)
};

double replicate_statistic(const NullContext& ctx, Statistic statistic,
                           std::span<const double> draws) {
  const std::size_t k = ctx.limits.size() + 1;
  // cumulative counts at each interior limit; the open top class absorbs the rest
  std::vector<double> cum(ctx.limits.size());
  for (std::size_t i = 0; i < ctx.limits.size(); ++i)
    cum[i] = static_cast<double>(kernels::count_le(draws, ctx.limits[i]));

  const double n = static_cast<double>(draws.size());
  if (statistic == Statistic::ks) {
    double d = 0.0;
    for (std::size_t i = 0; i < cum.size(); ++i)
      d = std::max(d, std::fabs(cum[i] / n - ctx.model_cdf[i]));
    return d;
  }
  std::vector<double> counts(k);
  double prev = 0.0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    counts[i] = cum[i] - prev;
    prev = cum[i];
  }
  counts[k - 1] = n - prev;
  return chi2_statistic(counts, ctx.expected);
}

}  // namespace

std::vector<double> mc_null_statistics(const GroupedSample& sample, const DistributionSpec& spec,
                                       Unit unit, Statistic statistic, int replicates,
                                       std::uint64_t seed, int mc_sample_size) {
  validate_params(spec);
  if (replicates < 1) raise(Errc::invalid_config, "replicates must be >= 1");
  if (mc_sample_size < 1) raise(Errc::invalid_config, "mc_sample_size must be >= 1");

  NullContext ctx;
  ctx.limits = sample.interior_limits();
  ctx.model_cdf.reserve(ctx.limits.size());
  for (double z : ctx.limits) ctx.model_cdf.push_back(cdf(spec, z));
  if (statistic == Statistic::chi2) ctx.expected = expected_class_counts(spec, sample, unit);

  std::vector<double> stats(static_cast<std::size_t>(replicates));
  std::vector<double> draws(static_cast<std::size_t>(mc_sample_size));
  for (int r = 0; r < replicates; ++r) {
    RandomStream rng = RandomStream::child(seed, static_cast<std::uint64_t>(r));
    sample_into(spec, draws, rng);
    stats[static_cast<std::size_t>(r)] = replicate_statistic(ctx, statistic, draws);
  }
  return stats;
}

GofReport mc_pvalue_of_observed(const GroupedSample& sample, const DistributionSpec& spec,
                                Unit unit, Statistic statistic, double observed_value,
                                int replicates, std::uint64_t seed) {
  if (replicates < 100)
    raise(Errc::invalid_config, "need >= 100 replicates for a reportable p-value");
  const std::vector<double> stats =
      mc_null_statistics(sample, spec, unit, statistic, replicates, seed);
  // ties count as not exceeding
  const auto exceed = static_cast<double>(
      std::count_if(stats.begin(), stats.end(), [&](double s) { return s > observed_value; }));
  GofReport report;
  report.statistic = statistic;
  report.observed_value = observed_value;
  report.p_value = exceed / static_cast<double>(replicates);
  report.replicates = replicates;
  report.mc_sample_size = kMcSampleSize;
  report.seed = seed;
  return report;
}

GofReport mc_pvalue(const GroupedSample& sample, const DistributionSpec& spec, Unit unit,
                    Statistic statistic, int replicates, std::uint64_t seed) {
  const double observed = statistic == Statistic::ks ? ks_grouped(sample, spec, unit)
                                                     : chi2_grouped(sample, spec, unit);
  return mc_pvalue_of_observed(sample, spec, unit, statistic, observed, replicates, seed);
}

}  // namespace expdist
