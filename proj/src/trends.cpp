#include "expdist/trends.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "expdist/errors.hpp"
#include "expdist/special.hpp"

namespace expdist {

TrendResult linear_trend(std::span<const double> times, std::span<const double> values) {
  const std::size_t n = times.size();
  if (n != values.size()) raise(Errc::length_mismatch, "times and values lengths differ");
  if (n < 3) raise(Errc::degenerate_design, "trend regression needs n >= 3");

  double mt = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += times[i];
    mv += values[i];
  }
  mt /= static_cast<double>(n);
  mv /= static_cast<double>(n);

  double stt = 0.0, stv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = times[i] - mt;
    const double dv = values[i] - mv;
    stt += dt * dt;
    stv += dt * dv;
    svv += dv * dv;
  }
  if (!(stt > 0.0)) raise(Errc::degenerate_design, "times are all equal");

  TrendResult out;
  out.n = static_cast<int>(n);
  out.slope = stv / stt;
  out.intercept = mv - out.slope * mt;

  const double dof = static_cast<double>(n - 2);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = values[i] - (out.intercept + out.slope * times[i]);
    sse += r * r;
  }
  out.error_variance = sse / dof;
  out.r2 = svv > 0.0 ? 1.0 - sse / svv : 1.0;

  const double se = std::sqrt(out.error_variance / stt);
  if (se > 0.0) {
    const double t = out.slope / se;
    out.slope_p_value = special::student_t_two_sided_p(t, dof);
    out.f_stat = t * t;
    const double tq = special::student_t_quantile(0.975, dof);
    out.ci95 = {out.slope - tq * se, out.slope + tq * se};
  } else {  // zero residual variance: the line is exact
    out.slope_p_value = out.slope == 0.0 ? 1.0 : 0.0;
    out.f_stat = out.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    out.ci95 = {out.slope, out.slope};
  }
  return out;
}

QuadraticTrendResult quadratic_trend(std::span<const double> times,
                                     std::span<const double> values) {
  const std::size_t n = times.size();
  if (n != values.size()) raise(Errc::length_mismatch, "times and values lengths differ");
  if (n < 4) raise(Errc::degenerate_design, "quadratic trend needs n >= 4");

  // center time to keep the normal equations well-conditioned
  double mt = 0.0;
  for (double t : times) mt += t;
  mt /= static_cast<double>(n);

  double s0 = static_cast<double>(n), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  double sy = 0, sty = 0, st2y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = times[i] - mt;
    const double t2 = t * t;
    s1 += t;
    s2 += t2;
    s3 += t2 * t;
    s4 += t2 * t2;
    sy += values[i];
    sty += t * values[i];
    st2y += t2 * values[i];
  }
  // solve the 3x3 normal equations by Gaussian elimination
  double a[3][4] = {{s0, s1, s2, sy}, {s1, s2, s3, sty}, {s2, s3, s4, st2y}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-12) raise(Errc::degenerate_design, "singular design");
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  const double c0 = a[0][3] / a[0][0];
  const double c1 = a[1][3] / a[1][1];
  const double c2 = a[2][3] / a[2][2];

  QuadraticTrendResult out;
  out.n = static_cast<int>(n);
  out.curvature = c2;
  out.slope = c1 - 2.0 * c2 * mt;
  out.intercept = c0 - c1 * mt + c2 * mt * mt;

  double my = sy / static_cast<double>(n);
  double sse = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = times[i] - mt;
    const double r = values[i] - (c0 + c1 * t + c2 * t * t);
    sse += r * r;
    svv += (values[i] - my) * (values[i] - my);
  }
  out.r2 = svv > 0.0 ? 1.0 - sse / svv : 1.0;
  out.error_variance = sse / static_cast<double>(n - 3);
  return out;
}

const char* mixture_parameter_name(MixtureParameter parameter) {
  switch (parameter) {
    case MixtureParameter::x_M: return "x_M";
    case MixtureParameter::sigma2: return "sigma2";
    case MixtureParameter::nu: return "nu";
    case MixtureParameter::x0: return "x0";
    case MixtureParameter::pi: return "pi";
  }
  return "?";
}

MixtureParameter mixture_parameter_from_name(const std::string& name) {
  for (MixtureParameter p : {MixtureParameter::x_M, MixtureParameter::sigma2,
                             MixtureParameter::nu, MixtureParameter::x0, MixtureParameter::pi}) {
    if (name == mixture_parameter_name(p)) return p;
  }
  raise(Errc::bad_input, "unknown mixture parameter '" + name + "'");
}

TrendResult trend_report(std::span<const std::pair<double, FitResult>> fit_series,
                         MixtureParameter parameter) {
  if (fit_series.size() < 3) raise(Errc::degenerate_design, "trend needs >= 3 fits");
  std::vector<double> times, values;
  times.reserve(fit_series.size());
  values.reserve(fit_series.size());
  for (const auto& [midpoint, fit] : fit_series) {
    if (family_of(fit.spec) != Family::mixture)
      raise(Errc::mixed_families, "trend_report expects mixture-family fits");
    const auto& p = std::get<MixtureParams>(fit.spec);
    times.push_back(midpoint);
    switch (parameter) {
      case MixtureParameter::x_M: values.push_back(p.x_M); break;
      case MixtureParameter::sigma2: values.push_back(p.sigma2); break;
      case MixtureParameter::nu: values.push_back(p.nu); break;
      case MixtureParameter::x0: values.push_back(p.x0); break;
      case MixtureParameter::pi: values.push_back(p.pi); break;
    }
  }
  return linear_trend(times, values);
}

}  // namespace expdist
