#pragma once

#include <cstddef>
#include <span>

// Bulk numeric kernels used by the hot paths (sampling transforms, KDE
// accumulation, Monte-Carlo binning, Gini reductions). Every operation has a
// scalar reference implementation and an AVX2 variant; the backend is chosen
// at runtime (cpuid, overridable via EXPDIST_KERNELS=scalar|avx2 or
// set_backend). The equivalence suite in tests/ checks the variants against
// each other and against libm.

namespace expdist::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend backend);
// Throws invalid_config if the backend is not available on this machine.
void set_backend(Backend backend);
const char* backend_name(Backend backend);

// out[i] = exp(x[i]); inputs outside [-708.4, 709.8] saturate to 0 / +inf.
void vexp(std::span<const double> x, std::span<double> out);

// out[i] = log(x[i]); x[i] > 0 expected (0 -> -inf, negative -> NaN).
void vlog(std::span<const double> x, std::span<double> out);

double sum(std::span<const double> x);

// Σ (i+1) * x[i], the sorted-Gini inner product.
double weighted_index_sum(std::span<const double> x);

// Number of elements <= threshold.
std::size_t count_le(std::span<const double> x, double threshold);

// out[j] += weight * exp(-0.5 * ((grid[j] - center) * inv_bw)^2)
void gauss_accum(std::span<const double> grid, std::span<double> out,
                 double center, double inv_bw, double weight);

namespace detail {

struct Ops {
  void (*vexp)(std::span<const double>, std::span<double>);
  void (*vlog)(std::span<const double>, std::span<double>);
  double (*sum)(std::span<const double>);
  double (*weighted_index_sum)(std::span<const double>);
  std::size_t (*count_le)(std::span<const double>, double);
  void (*gauss_accum)(std::span<const double>, std::span<double>, double, double, double);
};

const Ops& scalar_ops();
#if defined(EXPDIST_HAVE_AVX2)
const Ops& avx2_ops();
#endif

}  // namespace detail

}  // namespace expdist::kernels
