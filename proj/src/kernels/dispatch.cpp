#include <cstdlib>
#include <string>

#include "expdist/errors.hpp"
#include "expdist/kernels.hpp"

namespace expdist::kernels {
namespace {

using detail::Ops;

bool cpu_has_avx2() {
#if defined(EXPDIST_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& ops_for(Backend backend) {
#if defined(EXPDIST_HAVE_AVX2)
  if (backend == Backend::avx2) return detail::avx2_ops();
#endif
  (void)backend;
  return detail::scalar_ops();
}

Backend detect_backend() {
  if (const char* env = std::getenv("EXPDIST_KERNELS")) {
    const std::string value(env);
    if (value == "scalar") return Backend::scalar;
    if (value == "avx2" && cpu_has_avx2()) return Backend::avx2;
    if (value == "avx2")
      raise(Errc::invalid_config, "EXPDIST_KERNELS=avx2 but this CPU lacks AVX2/FMA");
    if (!value.empty() && value != "auto")
      raise(Errc::invalid_config, "unknown EXPDIST_KERNELS value '" + value + "'");
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

struct Dispatch {
  Backend backend;
  const Ops* ops;
  Dispatch() : backend(detect_backend()), ops(&ops_for(backend)) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool backend_available(Backend backend) {
  return backend == Backend::scalar || cpu_has_avx2();
}

void set_backend(Backend backend) {
  if (!backend_available(backend))
    raise(Errc::invalid_config, std::string(backend_name(backend)) + " backend unavailable");
  dispatch().backend = backend;
  dispatch().ops = &ops_for(backend);
}

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

void vexp(std::span<const double> x, std::span<double> out) { dispatch().ops->vexp(x, out); }
void vlog(std::span<const double> x, std::span<double> out) { dispatch().ops->vlog(x, out); }
double sum(std::span<const double> x) { return dispatch().ops->sum(x); }
double weighted_index_sum(std::span<const double> x) {
  return dispatch().ops->weighted_index_sum(x);
}
std::size_t count_le(std::span<const double> x, double threshold) {
  return dispatch().ops->count_le(x, threshold);
}
void gauss_accum(std::span<const double> grid, std::span<double> out, double center,
                 double inv_bw, double weight) {
  dispatch().ops->gauss_accum(grid, out, center, inv_bw, weight);
}

}  // namespace expdist::kernels
