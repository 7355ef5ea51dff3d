#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "expdist/distributions.hpp"
#include "expdist/grouped_data.hpp"

namespace expdist {

struct FitResult {
  DistributionSpec spec;
  double chi2 = 0.0;
  int n_classes = 0;
  int n_params = 0;
  int starts_tried = 0;
  bool converged = false;
  // Set when the optimum sits within 1e-3 of a box edge (pi near 0 or 1).
  bool near_boundary = false;
};

// Per-class expected counts out of 1000: entry i = 1000 * (F(z_i) - F(z_{i-1})),
// final entry 1000 * (1 - F(z_{k-1})). Entries sum to 1000 exactly.
std::vector<double> expected_class_counts(const DistributionSpec& spec,
                                          const GroupedSample& sample, Unit unit);

// Σ (observed - predicted)^2 / predicted. Cells with predicted < 1e-6 are
// merged into a neighbor (rightward; the last cell merges left) before the
// sum; throws degenerate_prediction if no positive cell remains.
double chi2_statistic(std::span<const double> observed, std::span<const double> predicted);

struct FitOptions {
  std::uint64_t seed = 0;          // != 0 jitters the start points
  int max_evals_per_start = 10000;
  double simplex_tol = 1e-8;       // diameter in transformed space
  bool parallel_starts = true;
  // When set, optimize from this single start only (e.g. published values).
  std::optional<DistributionSpec> single_start;
};

// Chi-square minimum-distance fit via Nelder-Mead in transformed coordinates
// (log for positive parameters, logit for pi) with a deterministic multi-start
// grid; the best start wins, ties broken by start index.
FitResult fit_chi2(const GroupedSample& sample, Family family, Unit unit,
                   const FitOptions& options = {});

struct WeibullGridFit {
  double k = 0.0;
  double lambda = 0.0;
  double r2 = 0.0;
};

// Grid search over k: OLS of log class frequency on log(midpoint) and
// midpoint^k (open top class excluded); returns the k maximizing R^2 with
// lambda recovered from the x^k coefficient (coefficient = -lambda^-k).
WeibullGridFit fit_weibull_grid(const GroupedSample& sample, Unit unit,
                                std::span<const double> k_grid);

// k in {1.0, 1.1, ..., 5.0}.
std::vector<double> default_weibull_grid();

}  // namespace expdist
