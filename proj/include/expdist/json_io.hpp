#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "expdist/estimation.hpp"
#include "expdist/gof.hpp"
#include "expdist/trends.hpp"

namespace expdist {

// {"family": "...", "params": {...}} with parameter names exactly as in the
// parameter structs (x_M, sigma2, nu, x0, pi, alpha, beta, scale, rate,
// shape, k, lambda).
nlohmann::json spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const nlohmann::json& j);
DistributionSpec load_spec_json(const std::string& path);

nlohmann::json fit_result_to_json(const FitResult& fit);
nlohmann::json gof_report_to_json(const GofReport& report);
nlohmann::json trend_result_to_json(const TrendResult& trend);

// FNV-1a over the file bytes, hex-encoded; cheap provenance fingerprint.
std::string file_fnv1a_hex(const std::string& path);

// {"input_hash": ..., "seed": ..., "version": ..., "kernels": ...}
nlohmann::json provenance_block(const std::string& input_path, std::uint64_t seed);

}  // namespace expdist
