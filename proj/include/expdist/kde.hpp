#pragma once

#include <span>
#include <string>
#include <vector>

#include "expdist/grouped_data.hpp"

namespace expdist {

enum class CurveScale { level, log_scale };

struct KdeCurve {
  std::vector<double> grid;     // ascending; log-money or money points
  std::vector<double> density;
  double bandwidth = 0.0;
  CurveScale scale = CurveScale::log_scale;
};

// Gaussian rule-of-thumb bandwidth 0.9 * sigma * n^(-1/5); sigma is the
// standard deviation of log consumption. Requires sigma > 0 and n >= 2.
double silverman_bandwidth(double sigma_log, std::size_t n);

// Frequency-weighted standard deviation of log class means; the sigma the
// bandwidth rule wants when only a grouped table is available.
double weighted_log_sigma(const GroupedSample& sample, Unit unit);

// Default evaluation grid: points equally spaced on the log scale spanning
// [log(first positive limit) - 3h, log(2 * max class mean) + 3h].
std::vector<double> default_log_grid(const GroupedSample& sample, double bandwidth,
                                     std::size_t points = 512);

// Log-scale Gaussian KDE with one kernel per class mean, weighted by
// freq_i / Σfreq. With truncated = true each kernel is renormalized to its
// class's log-limits and contributes nothing outside them.
KdeCurve grouped_kde(const GroupedSample& sample, Unit unit, double bandwidth,
                     std::span<const double> log_grid, bool truncated);

// Change of variables f_X(x) = f_log(log x) / x; grid becomes exp(grid).
KdeCurve to_level_scale(const KdeCurve& curve);

// Pointwise convex combination; grids and scales must match exactly.
KdeCurve pool_national(const KdeCurve& rural, const KdeCurve& urban, double rural_share);

double trapezoid_mass(const KdeCurve& curve);

// Two-column CSV: x,density.
void write_curve_csv(const std::string& path, const KdeCurve& curve);

}  // namespace expdist
