#include "expdist/microfoundation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <thread>

#include "expdist/csv.hpp"
#include "expdist/errors.hpp"
#include "expdist/rng.hpp"

namespace expdist {

double RatioDist::mean() const {
  switch (kind) {
    case Kind::point_mass: return a;
    case Kind::uniform: return 0.5 * (a + b);
    case Kind::exponential: return a;
  }
  return 0.0;
}

RatioDist RatioDist::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    raise(Errc::invalid_config, "ratio distribution must look like 'uniform:0,0.01'");
  const std::string name = text.substr(0, colon);
  const auto args = csv::split_line(text.substr(colon + 1));
  auto arg = [&](std::size_t i) { return csv::to_number(args.at(i), 0); };
  RatioDist dist;
  if (name == "point" && args.size() == 1) {
    dist.kind = Kind::point_mass;
    dist.a = arg(0);
  } else if (name == "uniform" && args.size() == 2) {
    dist.kind = Kind::uniform;
    dist.a = arg(0);
    dist.b = arg(1);
  } else if (name == "exponential" && args.size() == 1) {
    dist.kind = Kind::exponential;
    dist.a = arg(0);
  } else {
    raise(Errc::invalid_config, "unknown ratio distribution '" + text + "'");
  }
  return dist;
}

std::string RatioDist::describe() const {
  switch (kind) {
    case Kind::point_mass: return "point:" + csv::format_number(a);
    case Kind::uniform: return "uniform:" + csv::format_number(a) + "," + csv::format_number(b);
    case Kind::exponential: return "exponential:" + csv::format_number(a);
  }
  return "?";
}

namespace {

double draw_ratio(const RatioDist& dist, RandomStream& rng) {
  switch (dist.kind) {
    case RatioDist::Kind::point_mass:
      return dist.a;
    case RatioDist::Kind::uniform:
      return dist.a + (dist.b - dist.a) * rng.uniform01();
    case RatioDist::Kind::exponential:
      return -dist.a * std::log1p(-rng.uniform01());
  }
  return 0.0;
}

long draw_tau(const TauMode& mode, RandomStream& rng) {
  if (mode.fixed) return mode.tau;
  // geometric on {1, 2, ...} with success probability 1/mean
  const double q = 1.0 / mode.geometric_mean;
  const double u = rng.uniform01();
  return 1 + static_cast<long>(std::floor(std::log1p(-u) / std::log1p(-q)));
}

constexpr std::size_t kBlockSize = 1 << 16;

}  // namespace

void validate_config(const AgentModelConfig& config) {
  if (config.n_agents < 1) raise(Errc::invalid_config, "n_agents must be >= 1");
  if (!(config.kappa > 0.0)) raise(Errc::invalid_config, "kappa must be positive");
  if (config.tau.fixed) {
    if (config.tau.tau < 2) raise(Errc::invalid_config, "fixed tau must be >= 2");
  } else if (!(config.tau.geometric_mean > 1.0)) {
    raise(Errc::invalid_config, "geometric tau mean must exceed 1");
  }
  switch (config.ratios.kind) {
    case RatioDist::Kind::point_mass:
      if (!(config.ratios.a > 0.0)) raise(Errc::invalid_config, "ratio point mass must be > 0");
      break;
    case RatioDist::Kind::uniform:
      if (!(config.ratios.a >= 0.0) || !(config.ratios.b > config.ratios.a))
        raise(Errc::invalid_config, "uniform ratio needs 0 <= lo < hi");
      break;
    case RatioDist::Kind::exponential:
      if (!(config.ratios.a > 0.0)) raise(Errc::invalid_config, "exponential mean must be > 0");
      break;
  }
}

std::vector<double> simulate_consumption(const AgentModelConfig& config) {
  validate_config(config);
  std::vector<double> out(config.n_agents);

  const std::size_t blocks = (config.n_agents + kBlockSize - 1) / kBlockSize;
  auto run_block = [&](std::size_t block) {
    RandomStream rng = RandomStream::child(config.seed, block);
    const std::size_t begin = block * kBlockSize;
    const std::size_t end = std::min(begin + kBlockSize, config.n_agents);
    for (std::size_t i = begin; i < end; ++i) {
      const long tau = draw_tau(config.tau, rng);
      double s = 0.0;
      for (long g = 1; g < tau; ++g) s += draw_ratio(config.ratios, rng);
      out[i] = config.kappa * (1.0 + s);
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (blocks > 1 && hw > 1) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
    };
    std::vector<std::future<void>> pool;
    const unsigned n_workers = std::min<unsigned>(hw, static_cast<unsigned>(blocks));
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }
  return out;
}

double tail_exponent_hill(std::span<const double> values, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0))
    raise(Errc::bad_input, "top_fraction must lie strictly between 0 and 1");
  const std::size_t k = static_cast<std::size_t>(
      std::floor(top_fraction * static_cast<double>(values.size())));
  if (k < 100)
    raise(Errc::insufficient_tail,
          "need at least 100 observations above the cut, got " + std::to_string(k));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double threshold = sorted[k];  // (k+1)-th order statistic from the top
  if (!(threshold > 0.0)) raise(Errc::insufficient_tail, "tail threshold is not positive");

  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += std::log(sorted[i] / threshold);
  if (!(acc > 0.0)) raise(Errc::insufficient_tail, "degenerate tail (all values equal)");
  return static_cast<double>(k) / acc;
}

void write_sample_csv(const std::string& path, std::span<const double> values) {
  csv::Table table;
  table.header = {"consumption"};
  for (double v : values) table.rows.push_back({csv::format_number(v)});
  csv::write_file(path, table);
}

}  // namespace expdist
