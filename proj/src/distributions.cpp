#include "expdist/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expdist/errors.hpp"
#include "expdist/kernels.hpp"
#include "expdist/special.hpp"

namespace expdist {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) raise(Errc::invalid_params, what);
}

double lognormal_pdf(double x, double x_M, double sigma2) {
  if (x <= 0.0) return 0.0;
  const double z = std::log(x) - std::log(x_M);
  return kInvSqrt2Pi / (x * std::sqrt(sigma2)) * std::exp(-0.5 * z * z / sigma2);
}

double lognormal_cdf(double x, double x_M, double sigma2) {
  if (x <= 0.0) return 0.0;
  return special::normal_cdf((std::log(x) - std::log(x_M)) / std::sqrt(sigma2));
}

double lognormal_quantile(double p, double x_M, double sigma2) {
  return std::exp(std::log(x_M) + std::sqrt(sigma2) * special::normal_quantile(p));
}

double pareto_pdf(double x, double nu, double x0) {
  if (x < x0) return 0.0;
  return nu / x * std::pow(x0 / x, nu);
}

double pareto_cdf(double x, double nu, double x0) {
  if (x <= x0) return 0.0;
  return -std::expm1(nu * std::log(x0 / x));
}

double pareto_quantile(double p, double nu, double x0) {
  return x0 * std::pow(1.0 - p, -1.0 / nu);
}

double dp_norm(const DoubleParetoParams& dp) { return dp.alpha * dp.beta / (dp.alpha + dp.beta); }

}  // namespace

Family family_of(const DistributionSpec& spec) {
  return std::visit(
      Overloaded{[](const LognormalParams&) { return Family::lognormal; },
                 [](const ParetoParams&) { return Family::pareto; },
                 [](const MixtureParams&) { return Family::mixture; },
                 [](const DoubleParetoParams&) { return Family::double_pareto; },
                 [](const ExponentialParams&) { return Family::exponential; },
                 [](const GammaParams&) { return Family::gamma; },
                 [](const WeibullParams&) { return Family::weibull; }},
      spec);
}

const char* family_name(Family family) {
  switch (family) {
    case Family::lognormal: return "lognormal";
    case Family::pareto: return "pareto";
    case Family::mixture: return "mixture";
    case Family::double_pareto: return "double_pareto";
    case Family::exponential: return "exponential";
    case Family::gamma: return "gamma";
    case Family::weibull: return "weibull";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::lognormal, Family::pareto, Family::mixture, Family::double_pareto,
                   Family::exponential, Family::gamma, Family::weibull}) {
    if (name == family_name(f)) return f;
  }
  raise(Errc::bad_input, "unknown family '" + name + "'");
}

int free_parameter_count(Family family) {
  switch (family) {
    case Family::lognormal: return 2;
    case Family::pareto: return 2;
    case Family::mixture: return 5;
    case Family::double_pareto: return 3;
    case Family::exponential: return 1;
    case Family::gamma: return 2;
    case Family::weibull: return 2;
  }
  return 0;
}

void validate_params(const DistributionSpec& spec) {
  std::visit(Overloaded{
                 [](const LognormalParams& p) {
                   require(std::isfinite(p.x_M) && p.x_M > 0.0, "lognormal: x_M must be > 0");
                   require(std::isfinite(p.sigma2) && p.sigma2 > 0.0,
                           "lognormal: sigma2 must be > 0");
                 },
                 [](const ParetoParams& p) {
                   require(std::isfinite(p.nu) && p.nu > 0.0, "pareto: nu must be > 0");
                   require(std::isfinite(p.x0) && p.x0 > 0.0, "pareto: x0 must be > 0");
                 },
                 [](const MixtureParams& p) {
                   require(std::isfinite(p.x_M) && p.x_M > 0.0, "mixture: x_M must be > 0");
                   require(std::isfinite(p.sigma2) && p.sigma2 > 0.0,
                           "mixture: sigma2 must be > 0");
                   require(std::isfinite(p.nu) && p.nu > 0.0, "mixture: nu must be > 0");
                   require(std::isfinite(p.x0) && p.x0 > 0.0, "mixture: x0 must be > 0");
                   require(p.pi >= 0.0 && p.pi <= 1.0, "mixture: pi must lie in [0, 1]");
                 },
                 [](const DoubleParetoParams& p) {
                   require(std::isfinite(p.alpha) && p.alpha > 0.0,
                           "double_pareto: alpha must be > 0");
                   require(std::isfinite(p.beta) && p.beta > 0.0,
                           "double_pareto: beta must be > 0");
                   require(std::isfinite(p.scale) && p.scale > 0.0,
                           "double_pareto: scale must be > 0");
                 },
                 [](const ExponentialParams& p) {
                   require(std::isfinite(p.rate) && p.rate > 0.0,
                           "exponential: rate must be > 0");
                 },
                 [](const GammaParams& p) {
                   require(std::isfinite(p.shape) && p.shape > 0.0, "gamma: shape must be > 0");
                   require(std::isfinite(p.scale) && p.scale > 0.0, "gamma: scale must be > 0");
                 },
                 [](const WeibullParams& p) {
                   require(std::isfinite(p.k) && p.k > 0.0, "weibull: k must be > 0");
                   require(std::isfinite(p.lambda) && p.lambda > 0.0,
                           "weibull: lambda must be > 0");
                 }},
             spec);
}

double pdf(const DistributionSpec& spec, double x) {
  validate_params(spec);
  return std::visit(
      Overloaded{
          [x](const LognormalParams& p) { return lognormal_pdf(x, p.x_M, p.sigma2); },
          [x](const ParetoParams& p) { return pareto_pdf(x, p.nu, p.x0); },
          [x](const MixtureParams& p) {
            return p.pi * pareto_pdf(x, p.nu, p.x0) +
                   (1.0 - p.pi) * lognormal_pdf(x, p.x_M, p.sigma2);
          },
          [x](const DoubleParetoParams& p) {
            if (x <= 0.0) return 0.0;
            const double y = x / p.scale;
            const double c = dp_norm(p) / p.scale;
            return y <= 1.0 ? c * std::pow(y, p.beta - 1.0) : c * std::pow(y, -p.alpha - 1.0);
          },
          [x](const ExponentialParams& p) {
            return x < 0.0 ? 0.0 : p.rate * std::exp(-p.rate * x);
          },
          [x](const GammaParams& p) {
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
              if (p.shape > 1.0) return 0.0;
              if (p.shape == 1.0) return 1.0 / p.scale;
              return std::numeric_limits<double>::infinity();
            }
            return std::exp((p.shape - 1.0) * std::log(x) - x / p.scale - std::lgamma(p.shape) -
                            p.shape * std::log(p.scale));
          },
          [x](const WeibullParams& p) {
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
              if (p.k > 1.0) return 0.0;
              if (p.k == 1.0) return 1.0 / p.lambda;
              return std::numeric_limits<double>::infinity();
            }
            const double y = x / p.lambda;
            return p.k / p.lambda * std::pow(y, p.k - 1.0) * std::exp(-std::pow(y, p.k));
          }},
      spec);
}

double cdf(const DistributionSpec& spec, double x) {
  validate_params(spec);
  return std::visit(
      Overloaded{
          [x](const LognormalParams& p) { return lognormal_cdf(x, p.x_M, p.sigma2); },
          [x](const ParetoParams& p) { return pareto_cdf(x, p.nu, p.x0); },
          [x](const MixtureParams& p) {
            return p.pi * pareto_cdf(x, p.nu, p.x0) +
                   (1.0 - p.pi) * lognormal_cdf(x, p.x_M, p.sigma2);
          },
          [x](const DoubleParetoParams& p) {
            if (x <= 0.0) return 0.0;
            const double y = x / p.scale;
            if (y <= 1.0) return p.alpha / (p.alpha + p.beta) * std::pow(y, p.beta);
            return 1.0 - p.beta / (p.alpha + p.beta) * std::pow(y, -p.alpha);
          },
          [x](const ExponentialParams& p) {
            return x <= 0.0 ? 0.0 : -std::expm1(-p.rate * x);
          },
          [x](const GammaParams& p) {
            return x <= 0.0 ? 0.0 : special::regularized_gamma_p(p.shape, x / p.scale);
          },
          [x](const WeibullParams& p) {
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p.lambda, p.k));
          }},
      spec);
}

namespace {

// Bracketed inversion for families without a closed-form quantile.
double quantile_by_root(const DistributionSpec& spec, double p, double lo, double hi) {
  while (cdf(spec, lo) > p) lo *= 0.5;
  while (cdf(spec, hi) < p) hi *= 2.0;
  return special::brent_root([&](double x) { return cdf(spec, x) - p; }, lo, hi, 1e-13);
}

}  // namespace

double quantile(const DistributionSpec& spec, double p) {
  validate_params(spec);
  if (!(p > 0.0 && p < 1.0)) raise(Errc::invalid_params, "quantile requires 0 < p < 1");
  return std::visit(
      Overloaded{
          [p](const LognormalParams& q) { return lognormal_quantile(p, q.x_M, q.sigma2); },
          [p](const ParetoParams& q) { return pareto_quantile(p, q.nu, q.x0); },
          [&](const MixtureParams& q) {
            if (q.pi == 0.0) return lognormal_quantile(p, q.x_M, q.sigma2);
            if (q.pi == 1.0) return pareto_quantile(p, q.nu, q.x0);
            // the mixture quantile lies between the component quantiles
            const double a = lognormal_quantile(p, q.x_M, q.sigma2);
            const double b = pareto_quantile(p, q.nu, q.x0);
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            return quantile_by_root(spec, p, lo * (1.0 - 1e-9), hi * (1.0 + 1e-9));
          },
          [p](const DoubleParetoParams& q) {
            const double split = q.alpha / (q.alpha + q.beta);
            if (p <= split)
              return q.scale * std::pow(p * (q.alpha + q.beta) / q.alpha, 1.0 / q.beta);
            return q.scale *
                   std::pow((1.0 - p) * (q.alpha + q.beta) / q.beta, -1.0 / q.alpha);
          },
          [p](const ExponentialParams& q) { return -std::log1p(-p) / q.rate; },
          [&](const GammaParams& q) {
            // Wilson-Hilferty starting point, then bracketed root-finding.
            const double z = special::normal_quantile(p);
            const double a = q.shape;
            double guess = a * std::pow(std::max(1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a)),
                                                 1e-4),
                                        3.0);
            guess = std::max(guess * q.scale, 1e-280);
            return quantile_by_root(spec, p, guess * 0.25, guess * 4.0);
          },
          [p](const WeibullParams& q) {
            return q.lambda * std::pow(-std::log1p(-p), 1.0 / q.k);
          }},
      spec);
}

std::optional<double> mean(const DistributionSpec& spec) {
  validate_params(spec);
  return std::visit(
      Overloaded{
          [](const LognormalParams& p) -> std::optional<double> {
            return p.x_M * std::exp(0.5 * p.sigma2);
          },
          [](const ParetoParams& p) -> std::optional<double> {
            if (p.nu <= 1.0) return std::nullopt;
            return p.nu * p.x0 / (p.nu - 1.0);
          },
          [](const MixtureParams& p) -> std::optional<double> {
            const double body = p.x_M * std::exp(0.5 * p.sigma2);
            if (p.pi == 0.0) return body;
            if (p.nu <= 1.0) return std::nullopt;
            return p.pi * (p.nu * p.x0 / (p.nu - 1.0)) + (1.0 - p.pi) * body;
          },
          [](const DoubleParetoParams& p) -> std::optional<double> {
            if (p.alpha <= 1.0) return std::nullopt;
            return p.scale * dp_norm(p) * (1.0 / (p.beta + 1.0) + 1.0 / (p.alpha - 1.0));
          },
          [](const ExponentialParams& p) -> std::optional<double> { return 1.0 / p.rate; },
          [](const GammaParams& p) -> std::optional<double> { return p.shape * p.scale; },
          [](const WeibullParams& p) -> std::optional<double> {
            return p.lambda * std::tgamma(1.0 + 1.0 / p.k);
          }},
      spec);
}

namespace {

// Families whose draws are exp(e) for an affine/log transform e of the
// uniform fill `out` with exponents and finish with one bulk vexp.
void sample_exp_form(const DistributionSpec& spec, std::span<double> out, RandomStream& rng) {
  std::visit(Overloaded{
                 [&](const LognormalParams& p) {
                   const double mu = std::log(p.x_M);
                   const double s = std::sqrt(p.sigma2);
                   for (double& v : out) v = mu + s * special::normal_quantile(rng.uniform01());
                 },
                 [&](const ParetoParams& p) {
                   const double lx0 = std::log(p.x0);
                   for (double& v : out) v = lx0 - std::log1p(-rng.uniform01()) / p.nu;
                 },
                 [&](const MixtureParams& p) {
                   const double mu = std::log(p.x_M);
                   const double s = std::sqrt(p.sigma2);
                   const double lx0 = std::log(p.x0);
                   for (double& v : out) {
                     const double branch = rng.uniform01();
                     const double u = rng.uniform01();
                     v = branch < p.pi ? lx0 - std::log1p(-u) / p.nu
                                       : mu + s * special::normal_quantile(u);
                   }
                 },
                 [&](const WeibullParams& p) {
                   const double ll = std::log(p.lambda);
                   for (double& v : out)
                     v = ll + std::log(-std::log1p(-rng.uniform01())) / p.k;
                 },
                 [](const auto&) {}},
             spec);
  kernels::vexp(out, out);
}

double gamma_draw(double shape, double scale, RandomStream& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform01();
    return gamma_draw(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = special::normal_quantile(rng.uniform01());
    const double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform01();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v * scale;
  }
}

}  // namespace

void sample_into(const DistributionSpec& spec, std::span<double> out, RandomStream& rng) {
  validate_params(spec);
  switch (family_of(spec)) {
    case Family::lognormal:
    case Family::pareto:
    case Family::mixture:
    case Family::weibull:
      sample_exp_form(spec, out, rng);
      return;
    case Family::exponential: {
      const auto& p = std::get<ExponentialParams>(spec);
      for (double& v : out) v = 1.0 - rng.uniform01();
      kernels::vlog(out, out);
      for (double& v : out) v = -v / p.rate;
      return;
    }
    case Family::gamma: {
      const auto& p = std::get<GammaParams>(spec);
      for (double& v : out) v = gamma_draw(p.shape, p.scale, rng);
      return;
    }
    case Family::double_pareto: {
      const auto& p = std::get<DoubleParetoParams>(spec);
      const double split = p.alpha / (p.alpha + p.beta);
      for (double& v : out) {
        const double u = rng.uniform01();
        v = u <= split
                ? p.scale * std::pow(u * (p.alpha + p.beta) / p.alpha, 1.0 / p.beta)
                : p.scale * std::pow((1.0 - u) * (p.alpha + p.beta) / p.beta, -1.0 / p.alpha);
      }
      return;
    }
  }
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) raise(Errc::invalid_params, "sample requires n >= 1");
  std::vector<double> out(n);
  RandomStream rng(seed);
  sample_into(spec, out, rng);
  return out;
}

}  // namespace expdist
