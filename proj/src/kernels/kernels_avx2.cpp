#if defined(EXPDIST_HAVE_AVX2)

#include <immintrin.h>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "expdist/kernels.hpp"

// AVX2 backend. exp/log follow the Cephes rational approximations (the same
// scheme most vectorized libm implementations use); accuracy vs libm is a
// couple of ulp and is pinned by tests/test_kernels.cpp.

namespace expdist::kernels {
namespace {

constexpr double kExpHi = 709.782712893384;     // beyond: +inf
constexpr double kExpLo = -708.3964185322641;   // beyond: 0

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

// Assemble 2^k from 64-bit lane values (k within [-1022, 1023]).
inline __m256d exp2_from_epi64(__m256i k64) {
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, bias), 52);
  return _mm256_castsi256_pd(bits);
}

inline __m256d exp_core(__m256d x) {
  const __m256d log2e = splat(1.4426950408889634073599);
  const __m256d c1 = splat(6.93145751953125e-1);
  const __m256d c2 = splat(1.42860682030941723212e-6);

  const __m256d clamped = _mm256_max_pd(_mm256_min_pd(x, splat(kExpHi)), splat(kExpLo));

  // n = round(x / ln 2)
  const __m256d n_d = _mm256_round_pd(_mm256_mul_pd(clamped, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n_d, c1, clamped);
  r = _mm256_fnmadd_pd(n_d, c2, r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = splat(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, splat(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, splat(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = splat(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, splat(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, splat(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, splat(2.00000000000000000005e0));

  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(splat(2.0), e, splat(1.0));

  // scale by 2^n in two steps so n = +/-1024 stays representable:
  // k1 = floor(n/2) via 32-bit arithmetic shift, k2 = n - k1
  const __m128i n32 = _mm256_cvtpd_epi32(n_d);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i k1 = _mm256_cvtepi32_epi64(_mm_srai_epi32(n32, 1));
  const __m256i k2 = _mm256_sub_epi64(n64, k1);
  e = _mm256_mul_pd(e, exp2_from_epi64(k1));
  e = _mm256_mul_pd(e, exp2_from_epi64(k2));

  // saturate out-of-range inputs
  const __m256d inf = splat(HUGE_VAL);
  const __m256d hi_mask = _mm256_cmp_pd(x, splat(kExpHi), _CMP_GT_OQ);
  const __m256d lo_mask = _mm256_cmp_pd(x, splat(kExpLo), _CMP_LT_OQ);
  e = _mm256_blendv_pd(e, inf, hi_mask);
  e = _mm256_blendv_pd(e, _mm256_setzero_pd(), lo_mask);
  // NaN input -> NaN output
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  e = _mm256_blendv_pd(e, x, nan_mask);
  return e;
}

inline __m256d log_core(__m256d x) {
  const __m256d sqrth = splat(0.70710678118654752440);

  // Scale subnormals up so the exponent extraction below is exact.
  const __m256d tiny_mask = _mm256_cmp_pd(x, splat(2.2250738585072014e-308), _CMP_LT_OQ);
  const __m256d scaled = _mm256_mul_pd(x, splat(0x1.0p54));
  const __m256d xin = _mm256_blendv_pd(x, scaled, tiny_mask);

  const __m256i bits = _mm256_castpd_si256(xin);
  const __m256i exp_raw = _mm256_srli_epi64(bits, 52);
  // frexp-style mantissa in [0.5, 1)
  const __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
      _mm256_set1_epi64x(0x3fe0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);
  // e = exp_raw - 1022  (frexp exponent); int64 lanes, small values
  __m256i e64 = _mm256_sub_epi64(exp_raw, _mm256_set1_epi64x(1022));
  // subnormal correction
  const __m256i sub54 = _mm256_set1_epi64x(54);
  e64 = _mm256_sub_epi64(e64, _mm256_and_si256(_mm256_castpd_si256(tiny_mask), sub54));

  // if m < sqrt(1/2): e -= 1, m = 2m
  const __m256d lt = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), lt);
  e64 = _mm256_add_epi64(e64, _mm256_castpd_si256(lt));  // mask is all-ones = -1

  // pack the low 32 bits of each 64-bit lane (|e| <= ~1100 fits in int32)
  const __m128i e32 =
      _mm_castps_si128(_mm_shuffle_ps(_mm_castsi128_ps(_mm256_castsi256_si128(e64)),
                                      _mm_castsi128_ps(_mm256_extracti128_si256(e64, 1)),
                                      _MM_SHUFFLE(2, 0, 2, 0)));
  const __m256d e_d = _mm256_cvtepi32_pd(e32);

  const __m256d xm1 = _mm256_sub_pd(m, splat(1.0));
  const __m256d z = _mm256_mul_pd(xm1, xm1);

  __m256d p = splat(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, xm1, splat(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, xm1, splat(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, xm1, splat(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, xm1, splat(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, xm1, splat(7.70838733755885391666e0));

  __m256d q = _mm256_add_pd(xm1, splat(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, xm1, splat(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, xm1, splat(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, xm1, splat(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, xm1, splat(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(xm1, z), _mm256_div_pd(p, q));
  y = _mm256_fnmadd_pd(e_d, splat(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(splat(0.5), z, y);

  __m256d result = _mm256_add_pd(xm1, y);
  result = _mm256_fmadd_pd(e_d, splat(0.693359375), result);

  // edge cases: x <= 0, +inf, NaN
  const __m256d zero_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d neg_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
  const __m256d inf_mask = _mm256_cmp_pd(x, splat(HUGE_VAL), _CMP_EQ_OQ);
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  result = _mm256_blendv_pd(result, splat(-HUGE_VAL), zero_mask);
  result = _mm256_blendv_pd(result, splat(std::numeric_limits<double>::quiet_NaN()), neg_mask);
  result = _mm256_blendv_pd(result, splat(HUGE_VAL), inf_mask);
  result = _mm256_blendv_pd(result, x, nan_mask);
  return result;
}

const __m256i kTailMasks[4] = {
    _mm256_setr_epi64x(0, 0, 0, 0),
    _mm256_setr_epi64x(-1, 0, 0, 0),
    _mm256_setr_epi64x(-1, -1, 0, 0),
    _mm256_setr_epi64x(-1, -1, -1, 0),
};

template <typename Core>
void transform(std::span<const double> x, std::span<double> out, Core core) {
  assert(x.size() == out.size());
  std::size_t i = 0;
  const std::size_t n4 = x.size() & ~std::size_t{3};
  for (; i < n4; i += 4) {
    _mm256_storeu_pd(out.data() + i, core(_mm256_loadu_pd(x.data() + i)));
  }
  const std::size_t rest = x.size() - i;
  if (rest != 0) {
    const __m256i mask = kTailMasks[rest];
    const __m256d v = _mm256_maskload_pd(x.data() + i, mask);
    _mm256_maskstore_pd(out.data() + i, mask, core(v));
  }
}

void vexp_avx2(std::span<const double> x, std::span<double> out) {
  transform(x, out, [](__m256d v) { return exp_core(v); });
}

void vlog_avx2(std::span<const double> x, std::span<double> out) {
  transform(x, out, [](__m256d v) { return log_core(v); });
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(std::span<const double> x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n4 = x.size() & ~std::size_t{3};
  for (; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  double total = hsum(acc);
  for (; i < x.size(); ++i) total += x[i];
  return total;
}

double weighted_index_sum_avx2(std::span<const double> x) {
  __m256d acc = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  const __m256d four = splat(4.0);
  std::size_t i = 0;
  const std::size_t n4 = x.size() & ~std::size_t{3};
  for (; i < n4; i += 4) {
    acc = _mm256_fmadd_pd(idx, _mm256_loadu_pd(x.data() + i), acc);
    idx = _mm256_add_pd(idx, four);
  }
  double total = hsum(acc);
  for (; i < x.size(); ++i) total += static_cast<double>(i + 1) * x[i];
  return total;
}

std::size_t count_le_avx2(std::span<const double> x, double threshold) {
  const __m256d t = splat(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  const std::size_t n4 = x.size() & ~std::size_t{3};
  for (; i < n4; i += 4) {
    const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x.data() + i), t, _CMP_LE_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < x.size(); ++i) count += x[i] <= threshold;
  return count;
}

void gauss_accum_avx2(std::span<const double> grid, std::span<double> out, double center,
                      double inv_bw, double weight) {
  assert(grid.size() == out.size());
  const __m256d c = splat(center);
  const __m256d ib = splat(inv_bw);
  const __m256d w = splat(weight);
  const __m256d neg_half = splat(-0.5);
  std::size_t i = 0;
  const std::size_t n4 = grid.size() & ~std::size_t{3};
  for (; i < n4; i += 4) {
    const __m256d t = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(grid.data() + i), c), ib);
    const __m256d arg = _mm256_mul_pd(neg_half, _mm256_mul_pd(t, t));
    const __m256d e = exp_core(arg);
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(w, e, _mm256_loadu_pd(out.data() + i)));
  }
  for (; i < grid.size(); ++i) {
    const double t = (grid[i] - center) * inv_bw;
    double e;
    const __m256d ev = exp_core(_mm256_set1_pd(-0.5 * t * t));
    e = _mm_cvtsd_f64(_mm256_castpd256_pd128(ev));
    out[i] += weight * e;
  }
}

}  // namespace

namespace detail {

const Ops& avx2_ops() {
  static const Ops ops{vexp_avx2,       vlog_avx2,     sum_avx2,
                       weighted_index_sum_avx2, count_le_avx2, gauss_accum_avx2};
  return ops;
}

}  // namespace detail
}  // namespace expdist::kernels

#endif  // EXPDIST_HAVE_AVX2
