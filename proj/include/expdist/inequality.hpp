#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "expdist/distributions.hpp"
#include "expdist/grouped_data.hpp"

namespace expdist {

// Ordered Lorenz points beginning at (0,0) and ending at (1,1):
// P = cumulative population share, Q = cumulative expenditure share.
struct LorenzCurve {
  std::vector<double> P;
  std::vector<double> Q;
};

enum class GiniMethod { grouped_trapezoid, pairwise_sample };

struct GiniEstimate {
  double value = 0.0;  // percent, in [0, 100]
  GiniMethod method = GiniMethod::grouped_trapezoid;
};

// P_i = Σ_{j<=i} p_j, Q_i = Σ_{j<=i} p_j x̄_j / Σ_j p_j x̄_j with
// p_j = freq_j / Σfreq. Requires class means and ascending classes.
LorenzCurve lorenz_from_grouped(const GroupedSample& sample, Unit unit);

// Trapezoid area A under the piecewise-linear curve; value = (1 - 2A) * 100.
GiniEstimate gini_from_lorenz(const LorenzCurve& curve);

// Mean absolute difference Gini, computed with the sorted O(n log n)
// equivalent G = (2 Σ i x_(i) / (n Σ x)) - (n+1)/n, scaled to percent.
GiniEstimate gini_pairwise(std::span<const double> values);

// Monte-Carlo expenditure share of the top `fraction` of n draws.
double top_share(const DistributionSpec& spec, double fraction, std::size_t n,
                 std::uint64_t seed);

// gini_pairwise over n draws from spec.
GiniEstimate simulation_gini(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

void write_lorenz_csv(const std::string& path, const LorenzCurve& curve);

}  // namespace expdist
