#include "expdist/json_io.hpp"

#include <fstream>

#include "expdist/errors.hpp"
#include "expdist/kernels.hpp"
#include "expdist/version.hpp"

namespace expdist {

using nlohmann::json;

nlohmann::json spec_to_json(const DistributionSpec& spec) {
  json params;
  switch (family_of(spec)) {
    case Family::lognormal: {
      const auto& p = std::get<LognormalParams>(spec);
      params = {{"x_M", p.x_M}, {"sigma2", p.sigma2}};
      break;
    }
    case Family::pareto: {
      const auto& p = std::get<ParetoParams>(spec);
      params = {{"nu", p.nu}, {"x0", p.x0}};
      break;
    }
    case Family::mixture: {
      const auto& p = std::get<MixtureParams>(spec);
      params = {{"x_M", p.x_M}, {"sigma2", p.sigma2}, {"nu", p.nu}, {"x0", p.x0}, {"pi", p.pi}};
      break;
    }
    case Family::double_pareto: {
      const auto& p = std::get<DoubleParetoParams>(spec);
      params = {{"alpha", p.alpha}, {"beta", p.beta}, {"scale", p.scale}};
      break;
    }
    case Family::exponential:
      params = {{"rate", std::get<ExponentialParams>(spec).rate}};
      break;
    case Family::gamma: {
      const auto& p = std::get<GammaParams>(spec);
      params = {{"shape", p.shape}, {"scale", p.scale}};
      break;
    }
    case Family::weibull: {
      const auto& p = std::get<WeibullParams>(spec);
      params = {{"k", p.k}, {"lambda", p.lambda}};
      break;
    }
  }
  return {{"family", family_name(family_of(spec))}, {"params", params}};
}

DistributionSpec spec_from_json(const nlohmann::json& j) {
  if (!j.contains("family") || !j.contains("params"))
    raise(Errc::bad_input, "spec JSON needs 'family' and 'params'");
  const Family family = family_from_name(j.at("family").get<std::string>());
  const json& p = j.at("params");
  auto get = [&](const char* name) -> double {
    if (!p.contains(name))
      raise(Errc::bad_input, std::string("spec params missing '") + name + "'");
    return p.at(name).get<double>();
  };
  DistributionSpec spec;
  switch (family) {
    case Family::lognormal: spec = LognormalParams{get("x_M"), get("sigma2")}; break;
    case Family::pareto: spec = ParetoParams{get("nu"), get("x0")}; break;
    case Family::mixture:
      spec = MixtureParams{get("x_M"), get("sigma2"), get("nu"), get("x0"), get("pi")};
      break;
    case Family::double_pareto:
      spec = DoubleParetoParams{get("alpha"), get("beta"), get("scale")};
      break;
    case Family::exponential: spec = ExponentialParams{get("rate")}; break;
    case Family::gamma: spec = GammaParams{get("shape"), get("scale")}; break;
    case Family::weibull: spec = WeibullParams{get("k"), get("lambda")}; break;
  }
  validate_params(spec);
  return spec;
}

DistributionSpec load_spec_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(Errc::bad_input, "invalid JSON in '" + path + "': " + e.what());
  }
  return spec_from_json(j);
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  json j = spec_to_json(fit.spec);
  j["chi2"] = fit.chi2;
  j["n_classes"] = fit.n_classes;
  j["n_params"] = fit.n_params;
  j["starts_tried"] = fit.starts_tried;
  j["converged"] = fit.converged;
  j["near_boundary"] = fit.near_boundary;
  return j;
}

nlohmann::json gof_report_to_json(const GofReport& report) {
  return {{"statistic", statistic_name(report.statistic)},
          {"observed_value", report.observed_value},
          {"p_value", report.p_value},
          {"replicates", report.replicates},
          {"mc_sample_size", report.mc_sample_size},
          {"seed", report.seed}};
}

nlohmann::json trend_result_to_json(const TrendResult& trend) {
  return {{"intercept", trend.intercept},
          {"slope", trend.slope},
          {"slope_p_value", trend.slope_p_value},
          {"r2", trend.r2},
          {"f_stat", trend.f_stat},
          {"ci95", {trend.ci95[0], trend.ci95[1]}},
          {"error_variance", trend.error_variance},
          {"n", trend.n}};
}

std::string file_fnv1a_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

nlohmann::json provenance_block(const std::string& input_path, std::uint64_t seed) {
  return {{"input_hash", input_path.empty() ? "" : file_fnv1a_hex(input_path)},
          {"seed", seed},
          {"version", kVersion},
          {"kernels", kernels::backend_name(kernels::active_backend())}};
}

}  // namespace expdist
