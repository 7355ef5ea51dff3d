#include <cassert>
#include <cmath>

#include "expdist/kernels.hpp"

// Reference backend: plain loops over libm. The AVX2 backend is checked
// against these in the equivalence suite.

namespace expdist::kernels {
namespace {

void vexp_scalar(std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

void vlog_scalar(std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::log(x[i]);
}

double sum_scalar(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double weighted_index_sum_scalar(std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<double>(i + 1) * x[i];
  return acc;
}

std::size_t count_le_scalar(std::span<const double> x, double threshold) {
  std::size_t count = 0;
  for (double v : x) count += v <= threshold;
  return count;
}

void gauss_accum_scalar(std::span<const double> grid, std::span<double> out, double center,
                        double inv_bw, double weight) {
  assert(grid.size() == out.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = (grid[i] - center) * inv_bw;
    out[i] += weight * std::exp(-0.5 * t * t);
  }
}

}  // namespace

namespace detail {

const Ops& scalar_ops() {
  static const Ops ops{vexp_scalar,       vlog_scalar,     sum_scalar,
                       weighted_index_sum_scalar, count_le_scalar, gauss_accum_scalar};
  return ops;
}

}  // namespace detail
}  // namespace expdist::kernels
