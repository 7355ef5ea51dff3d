#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace expdist {

// Law of the taste ratios delta_i / delta_1. Any positive distribution with
// finite mean and variance qualifies; these three cover the tests and CLI.
struct RatioDist {
  enum class Kind { point_mass, uniform, exponential };
  Kind kind = Kind::uniform;
  double a = 0.0;  // point_mass: value; uniform: lower; exponential: mean
  double b = 0.0;  // uniform: upper

  double mean() const;
  // "point:0.5", "uniform:0,0.01", "exponential:0.2"
  static RatioDist parse(const std::string& text);
  std::string describe() const;
};

struct TauMode {
  bool fixed = true;
  long tau = 2;                 // fixed count of goods, >= 2
  double geometric_mean = 2.0;  // mean of the geometric law on {1, 2, ...}
};

struct AgentModelConfig {
  std::size_t n_agents = 0;
  double kappa = 1.0;  // necessity expenditure
  TauMode tau;
  RatioDist ratios;
  std::uint64_t seed = 0;
};

void validate_config(const AgentModelConfig& config);

// Reduced-form consumption c = kappa * (1 + Σ_{i=2..tau} ratio_i) per agent.
// Agents are partitioned into fixed-size blocks with per-block derived seeds;
// blocks may run concurrently and the output order is deterministic.
std::vector<double> simulate_consumption(const AgentModelConfig& config);

// Hill estimator of the upper-tail exponent over the top fraction of the
// sample; requires at least 100 observations above the cut.
double tail_exponent_hill(std::span<const double> values, double top_fraction);

void write_sample_csv(const std::string& path, std::span<const double> values);

}  // namespace expdist
