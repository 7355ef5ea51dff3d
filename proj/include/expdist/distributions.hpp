#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "expdist/rng.hpp"

namespace expdist {

// Parameterized by (x_M, sigma2): x_M = e^mu is the median of the body,
// matching how the fitted tables are reported; mu = log(x_M) internally.
struct LognormalParams {
  double x_M = 1.0;
  double sigma2 = 1.0;
};

struct ParetoParams {
  double nu = 2.0;   // tail exponent; density ~ x^-(nu+1) above x0
  double x0 = 1.0;   // tail cutoff
};

struct MixtureParams {
  double x_M = 1.0;
  double sigma2 = 1.0;
  double nu = 2.0;
  double x0 = 1.0;
  double pi = 0.0;   // weight of the Pareto component, in [0, 1]
};

// Standard form has the kink at scale = 1; real-data fits carry a scale.
struct DoubleParetoParams {
  double alpha = 2.0;  // upper-tail exponent
  double beta = 1.0;   // lower-tail exponent
  double scale = 1.0;
};

struct ExponentialParams {
  double rate = 1.0;
};

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
};

struct WeibullParams {
  double k = 1.0;
  double lambda = 1.0;
};

using DistributionSpec =
    std::variant<LognormalParams, ParetoParams, MixtureParams, DoubleParetoParams,
                 ExponentialParams, GammaParams, WeibullParams>;

enum class Family { lognormal, pareto, mixture, double_pareto, exponential, gamma, weibull };

Family family_of(const DistributionSpec& spec);
const char* family_name(Family family);
Family family_from_name(const std::string& name);
int free_parameter_count(Family family);

// Throws invalid_params when a parameter violates its family's constraints.
void validate_params(const DistributionSpec& spec);

double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);

// Inverse CDF; closed form where available, bracketed root-finding on the
// CDF for the mixture and gamma families. Requires 0 < p < 1.
double quantile(const DistributionSpec& spec, double p);

// Undefined (nullopt) for Pareto/mixture with nu <= 1 and double Pareto with
// alpha <= 1.
std::optional<double> mean(const DistributionSpec& spec);

// Deterministic for a fixed seed. Mixture draws consume two uniforms per
// observation: a Bernoulli(pi) branch selector, then the inverse CDF of the
// chosen component (Pareto inverse: x0 * (1-u)^(-1/nu)).
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

// Same transform, drawing from a caller-owned stream (replicate machinery).
void sample_into(const DistributionSpec& spec, std::span<double> out, RandomStream& rng);

}  // namespace expdist
