#include "expdist/inequality.hpp"

#include <algorithm>
#include <cmath>

#include "expdist/csv.hpp"
#include "expdist/errors.hpp"
#include "expdist/kernels.hpp"

namespace expdist {

LorenzCurve lorenz_from_grouped(const GroupedSample& sample, Unit unit) {
  const std::vector<double> means = sample.class_means();  // throws if any absent
  const double total = static_cast<double>(sample.total_freq(unit));
  if (!(total > 0.0)) raise(Errc::degenerate_sample, "no observations in the selected unit");

  double aggregate = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i)
    aggregate += static_cast<double>(sample.classes[i].freq(unit)) / total * means[i];
  if (!(aggregate > 0.0)) raise(Errc::degenerate_sample, "aggregate expenditure is zero");

  LorenzCurve curve;
  curve.P.reserve(means.size() + 1);
  curve.Q.reserve(means.size() + 1);
  curve.P.push_back(0.0);
  curve.Q.push_back(0.0);
  double p_cum = 0.0, q_cum = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double p = static_cast<double>(sample.classes[i].freq(unit)) / total;
    p_cum += p;
    q_cum += p * means[i] / aggregate;
    curve.P.push_back(p_cum);
    curve.Q.push_back(q_cum);
  }
  curve.P.back() = 1.0;
  curve.Q.back() = 1.0;
  return curve;
}

GiniEstimate gini_from_lorenz(const LorenzCurve& curve) {
  if (curve.P.size() != curve.Q.size() || curve.P.size() < 2)
    raise(Errc::bad_input, "Lorenz curve needs matching P/Q with at least 2 points");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.P.size(); ++i)
    area += 0.5 * (curve.Q[i] + curve.Q[i - 1]) * (curve.P[i] - curve.P[i - 1]);
  return {(1.0 - 2.0 * area) * 100.0, GiniMethod::grouped_trapezoid};
}

GiniEstimate gini_pairwise(std::span<const double> values) {
  if (values.size() < 2) raise(Errc::degenerate_sample, "need at least 2 observations");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) raise(Errc::degenerate_sample, "negative expenditure values");
  const double total = kernels::sum(sorted);
  if (!(total > 0.0)) raise(Errc::degenerate_sample, "mean expenditure is zero");
  const double n = static_cast<double>(sorted.size());
  const double indexed = kernels::weighted_index_sum(sorted);
  const double g = 2.0 * indexed / (n * total) - (n + 1.0) / n;
  return {g * 100.0, GiniMethod::pairwise_sample};
}

double top_share(const DistributionSpec& spec, double fraction, std::size_t n,
                 std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    raise(Errc::bad_input, "fraction must lie strictly between 0 and 1");
  if (!mean(spec)) raise(Errc::undefined_mean, "top_share needs a finite mean");
  std::vector<double> draws = sample(spec, n, seed);
  const std::size_t top = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  if (top == 0 || top >= n) raise(Errc::bad_input, "fraction leaves an empty group at this n");
  std::nth_element(draws.begin(), draws.end() - static_cast<std::ptrdiff_t>(top), draws.end());
  const double total = kernels::sum(draws);
  const double top_total =
      kernels::sum(std::span<const double>(draws).last(top));
  return top_total / total;
}

GiniEstimate simulation_gini(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (!mean(spec)) raise(Errc::undefined_mean, "simulation_gini needs a finite mean");
  const std::vector<double> draws = sample(spec, n, seed);
  return gini_pairwise(draws);
}

void write_lorenz_csv(const std::string& path, const LorenzCurve& curve) {
  csv::Table table;
  table.header = {"P", "Q"};
  for (std::size_t i = 0; i < curve.P.size(); ++i)
    table.rows.push_back({csv::format_number(curve.P[i]), csv::format_number(curve.Q[i])});
  csv::write_file(path, table);
}

}  // namespace expdist
