#include "expdist/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expdist/csv.hpp"
#include "expdist/errors.hpp"
#include "expdist/kernels.hpp"
#include "expdist/special.hpp"

namespace expdist {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

double silverman_bandwidth(double sigma_log, std::size_t n) {
  if (!(sigma_log > 0.0)) raise(Errc::invalid_config, "sigma_log must be positive");
  if (n < 2) raise(Errc::invalid_config, "bandwidth rule needs n >= 2");
  return 0.9 * sigma_log * std::pow(static_cast<double>(n), -0.2);
}

double weighted_log_sigma(const GroupedSample& sample, Unit unit) {
  const std::vector<double> means = sample.class_means();
  const double total = static_cast<double>(sample.total_freq(unit));
  double mean_log = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i)
    mean_log += static_cast<double>(sample.classes[i].freq(unit)) / total * std::log(means[i]);
  double var = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double d = std::log(means[i]) - mean_log;
    var += static_cast<double>(sample.classes[i].freq(unit)) / total * d * d;
  }
  return std::sqrt(var);
}

std::vector<double> default_log_grid(const GroupedSample& sample, double bandwidth,
                                     std::size_t points) {
  if (!(bandwidth > 0.0)) raise(Errc::invalid_config, "bandwidth must be positive");
  if (points < 2) raise(Errc::invalid_config, "grid needs at least 2 points");
  double first_positive = std::numeric_limits<double>::infinity();
  double max_mean = 0.0;
  for (const auto& cls : sample.classes) {
    if (cls.lower > 0.0) first_positive = std::min(first_positive, cls.lower);
    if (cls.class_mean) {
      first_positive = std::min(first_positive, *cls.class_mean);
      max_mean = std::max(max_mean, *cls.class_mean);
    }
  }
  if (!std::isfinite(first_positive) || !(max_mean > 0.0))
    raise(Errc::missing_class_means, "cannot derive a grid without positive limits and means");
  const double lo = std::log(first_positive) - 3.0 * bandwidth;
  const double hi = std::log(2.0 * max_mean) + 3.0 * bandwidth;
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  return grid;
}

KdeCurve grouped_kde(const GroupedSample& sample, Unit unit, double bandwidth,
                     std::span<const double> log_grid, bool truncated) {
  if (!(bandwidth > 0.0)) raise(Errc::invalid_config, "bandwidth must be positive");
  const std::vector<double> means = sample.class_means();  // throws if any absent
  if (!std::is_sorted(log_grid.begin(), log_grid.end()))
    raise(Errc::invalid_config, "grid must be ascending");

  KdeCurve curve;
  curve.grid.assign(log_grid.begin(), log_grid.end());
  curve.density.assign(log_grid.size(), 0.0);
  curve.bandwidth = bandwidth;
  curve.scale = CurveScale::log_scale;

  const double total = static_cast<double>(sample.total_freq(unit));
  const double inv_bw = 1.0 / bandwidth;
  const double norm = kInvSqrt2Pi * inv_bw;

  for (std::size_t i = 0; i < sample.classes.size(); ++i) {
    const auto& cls = sample.classes[i];
    const double w = static_cast<double>(cls.freq(unit)) / total;
    if (w == 0.0) continue;
    const double center = std::log(means[i]);
    if (!truncated) {
      kernels::gauss_accum(curve.grid, curve.density, center, inv_bw, w * norm);
      continue;
    }
    // restrict the kernel to the class's log-limits and renormalize its mass
    const double log_lo = cls.lower > 0.0 ? std::log(cls.lower)
                                          : -std::numeric_limits<double>::infinity();
    const double log_hi = cls.open_top() ? std::numeric_limits<double>::infinity()
                                         : std::log(cls.upper);
    const double mass_lo = std::isinf(log_lo) ? 0.0
                                              : special::normal_cdf((log_lo - center) * inv_bw);
    const double mass_hi = std::isinf(log_hi) ? 1.0
                                              : special::normal_cdf((log_hi - center) * inv_bw);
    const double mass = mass_hi - mass_lo;
    if (!(mass > 0.0)) continue;
    // [first, last) grid indices inside [log_lo, log_hi)
    const auto first = std::lower_bound(curve.grid.begin(), curve.grid.end(), log_lo);
    const auto last = std::lower_bound(curve.grid.begin(), curve.grid.end(), log_hi);
    const auto offset = static_cast<std::size_t>(first - curve.grid.begin());
    const auto count = static_cast<std::size_t>(last - first);
    if (count == 0) continue;
    kernels::gauss_accum(std::span<const double>(curve.grid).subspan(offset, count),
                         std::span<double>(curve.density).subspan(offset, count), center, inv_bw,
                         w * norm / mass);
  }
  return curve;
}

KdeCurve to_level_scale(const KdeCurve& curve) {
  if (curve.scale != CurveScale::log_scale)
    raise(Errc::invalid_config, "curve is already on the level scale");
  KdeCurve out;
  out.bandwidth = curve.bandwidth;
  out.scale = CurveScale::level;
  out.grid.resize(curve.grid.size());
  out.density.resize(curve.grid.size());
  kernels::vexp(curve.grid, out.grid);
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    out.density[i] = curve.density[i] / out.grid[i];
  return out;
}

KdeCurve pool_national(const KdeCurve& rural, const KdeCurve& urban, double rural_share) {
  if (!(rural_share >= 0.0 && rural_share <= 1.0))
    raise(Errc::invalid_config, "rural_share must lie in [0, 1]");
  if (rural.scale != urban.scale || rural.grid != urban.grid)
    raise(Errc::grid_mismatch, "curves must share an identical grid and scale");
  KdeCurve out = rural;
  for (std::size_t i = 0; i < out.density.size(); ++i)
    out.density[i] = rural_share * rural.density[i] + (1.0 - rural_share) * urban.density[i];
  return out;
}

double trapezoid_mass(const KdeCurve& curve) {
  double mass = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i)
    mass += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  return mass;
}

void write_curve_csv(const std::string& path, const KdeCurve& curve) {
  csv::Table table;
  table.header = {"x", "density"};
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    table.rows.push_back({csv::format_number(curve.grid[i]), csv::format_number(curve.density[i])});
  csv::write_file(path, table);
}

}  // namespace expdist
