#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "expdist/estimation.hpp"

namespace expdist {

struct TrendResult {
  double intercept = 0.0;
  double slope = 0.0;          // per year
  double slope_p_value = 1.0;  // two-sided t test of slope = 0, n-2 dof
  double r2 = 0.0;
  double f_stat = 0.0;
  std::array<double, 2> ci95{0.0, 0.0};
  double error_variance = 0.0;  // SSE / (n - 2)
  int n = 0;
};

// OLS of values on a linear polynomial of time. Requires n >= 3 and
// non-constant times.
TrendResult linear_trend(std::span<const double> times, std::span<const double> values);

struct QuadraticTrendResult {
  double intercept = 0.0;
  double slope = 0.0;
  double curvature = 0.0;  // coefficient of t^2
  double r2 = 0.0;
  double error_variance = 0.0;
  int n = 0;
};

QuadraticTrendResult quadratic_trend(std::span<const double> times,
                                     std::span<const double> values);

enum class MixtureParameter { x_M, sigma2, nu, x0, pi };

const char* mixture_parameter_name(MixtureParameter parameter);
MixtureParameter mixture_parameter_from_name(const std::string& name);

// Extracts the named mixture parameter from each fit and regresses it on the
// survey midpoints. All fits must be from the mixture family.
TrendResult trend_report(std::span<const std::pair<double, FitResult>> fit_series,
                         MixtureParameter parameter);

}  // namespace expdist
