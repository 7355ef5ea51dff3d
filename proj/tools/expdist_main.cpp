// expdist: fit heavy-tailed distributions to grouped expenditure tables,
// test them by Monte-Carlo resampling, and compute inequality measures.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expdist/csv.hpp"
#include "expdist/errors.hpp"
#include "expdist/estimation.hpp"
#include "expdist/gof.hpp"
#include "expdist/grouped_data.hpp"
#include "expdist/inequality.hpp"
#include "expdist/json_io.hpp"
#include "expdist/kde.hpp"
#include "expdist/microfoundation.hpp"
#include "expdist/trends.hpp"
#include "expdist/version.hpp"

namespace {

using nlohmann::json;
using namespace expdist;

struct CommonFlags {
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "random seed (default " + std::to_string(kDefaultSeed) + ")");
  cmd->add_option("--out", flags.out, "write output to this path instead of stdout");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const json& j, const CommonFlags& flags) {
  const std::string text = j.dump(2) + "\n";
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out);
  if (!out) raise(Errc::io_error, "cannot write '" + flags.out + "'");
  out << text;
}

struct InputFlags {
  std::string path;
  std::string unit = "person";
  std::string sector = "rural";
  std::string round;
  double midpoint = std::numeric_limits<double>::quiet_NaN();
  std::string deflators;
};

void add_input(CLI::App* cmd, InputFlags& flags, bool need_unit = true) {
  cmd->add_option("input", flags.path, "grouped CSV (lower,upper,class_mean,freq_households,freq_persons)")
      ->required();
  auto* unit = cmd->add_option("--unit", flags.unit, "frequency column to use")
                   ->check(CLI::IsMember({"household", "person"}));
  if (need_unit) unit->required();
  cmd->add_option("--sector", flags.sector, "sector label (rural|urban)")
      ->check(CLI::IsMember({"rural", "urban"}));
  cmd->add_option("--round", flags.round, "round label (default: file stem)");
  cmd->add_option("--midpoint", flags.midpoint, "survey midpoint as fractional year");
  cmd->add_option("--deflators", flags.deflators, "CSV round_label,index; divides limits/means");
}

GroupedSample load_input(const InputFlags& flags) {
  SampleMeta meta;
  meta.sector = sector_from_name(flags.sector);
  meta.round_label = flags.round;
  meta.survey_midpoint = flags.midpoint;
  GroupedSample sample = load_grouped_csv(flags.path, unit_from_name(flags.unit), meta);
  if (!flags.deflators.empty()) sample = deflate(sample, load_deflators_csv(flags.deflators));
  return sample;
}

// ---------------------------------------------------------------------------

int cmd_fit(const InputFlags& input, const CommonFlags& common, const std::string& family_name_,
            const std::string& method, const std::string& init_path) {
  const GroupedSample sample = load_input(input);
  json out;
  if (method == "weibull-grid") {
    const auto grid = default_weibull_grid();
    const WeibullGridFit fit = fit_weibull_grid(sample, sample.unit, grid);
    out = {{"family", "weibull"},
           {"method", "grid-regression"},
           {"params", {{"k", fit.k}, {"lambda", fit.lambda}}},
           {"r2", fit.r2}};
  } else {
    if (family_name_.empty()) raise(Errc::bad_input, "--family is required for chi2 fits");
    FitOptions options;
    options.seed = 0;  // deterministic start grid; --seed only drives sampling commands
    if (!init_path.empty()) options.single_start = load_spec_json(init_path);
    const FitResult fit = fit_chi2(sample, family_from_name(family_name_), sample.unit, options);
    out = fit_result_to_json(fit);
  }
  out["unit"] = unit_name(sample.unit);
  out["provenance"] = provenance_block(input.path, common.seed);
  emit(out, common);
  return 0;
}

int cmd_gof(const InputFlags& input, const CommonFlags& common, const std::string& family_name_,
            const std::string& spec_path, const std::string& statistic, int replicates,
            std::optional<double> observed) {
  const GroupedSample sample = load_input(input);
  DistributionSpec spec;
  json fitted;
  if (!spec_path.empty()) {
    spec = load_spec_json(spec_path);
  } else if (!family_name_.empty()) {
    const FitResult fit = fit_chi2(sample, family_from_name(family_name_), sample.unit);
    spec = fit.spec;
    fitted = fit_result_to_json(fit);
  } else {
    raise(Errc::bad_input, "gof needs --spec <json> or --family <name>");
  }

  const Statistic stat = statistic_from_name(statistic);
  const GofReport report =
      observed ? mc_pvalue_of_observed(sample, spec, sample.unit, stat, *observed, replicates,
                                       common.seed)
               : mc_pvalue(sample, spec, sample.unit, stat, replicates, common.seed);

  json out = gof_report_to_json(report);
  out["spec"] = spec_to_json(spec);
  if (!fitted.is_null()) out["fit"] = fitted;
  out["unit"] = unit_name(sample.unit);
  out["provenance"] = provenance_block(input.path, common.seed);
  emit(out, common);
  std::fprintf(stderr, "%s = %.4f, p = %.4f (%d replicates of %d, seed %llu)\n",
               statistic_name(report.statistic), report.observed_value, report.p_value,
               report.replicates, report.mc_sample_size,
               static_cast<unsigned long long>(report.seed));
  return 0;
}

int cmd_gini(const InputFlags& input, const CommonFlags& common, const std::string& lorenz_path) {
  const GroupedSample sample = load_input(input);
  const LorenzCurve curve = lorenz_from_grouped(sample, sample.unit);
  const GiniEstimate gini = gini_from_lorenz(curve);
  if (!lorenz_path.empty()) write_lorenz_csv(lorenz_path, curve);
  json out = {{"gini", gini.value},
              {"method", "grouped_trapezoid"},
              {"unit", unit_name(sample.unit)},
              {"points", curve.P.size()},
              {"provenance", provenance_block(input.path, common.seed)}};
  emit(out, common);
  std::fprintf(stderr, "Gini: %.2f\n", gini.value);
  return 0;
}

std::vector<double> grid_over(const GroupedSample& a, const GroupedSample* b, double bandwidth,
                              std::size_t points) {
  auto span_of = [&](const GroupedSample& s) {
    return default_log_grid(s, bandwidth, 2);  // two points = [lo, hi]
  };
  auto bounds = span_of(a);
  double lo = bounds.front(), hi = bounds.back();
  if (b != nullptr) {
    auto other = span_of(*b);
    lo = std::min(lo, other.front());
    hi = std::max(hi, other.back());
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

int cmd_kde(const std::vector<std::string>& inputs, const InputFlags& proto,
            const CommonFlags& common, double bandwidth, bool truncated,
            const std::string& scale, std::size_t points, const std::string& weights_path,
            double year) {
  if (inputs.empty() || inputs.size() > 2)
    raise(Errc::bad_input, "kde takes one input, or two (rural then urban) when pooling");
  InputFlags first = proto;
  first.path = inputs[0];
  GroupedSample rural = load_input(first);
  std::optional<GroupedSample> urban;
  if (inputs.size() == 2) {
    InputFlags second = proto;
    second.path = inputs[1];
    second.sector = "urban";
    urban = load_input(second);
    if (weights_path.empty() || std::isnan(year))
      raise(Errc::bad_input, "pooling needs --weights and --year");
  }

  double h = bandwidth;
  if (!(h > 0.0)) {
    // bandwidth rule with sigma from this table and the effective n = 1000
    h = silverman_bandwidth(weighted_log_sigma(rural, rural.unit), 1000);
  }
  const std::vector<double> grid = grid_over(rural, urban ? &*urban : nullptr, h, points);
  KdeCurve curve = grouped_kde(rural, rural.unit, h, grid, truncated);
  if (urban) {
    const KdeCurve urban_curve = grouped_kde(*urban, urban->unit, h, grid, truncated);
    const SectorWeights weights = load_sector_weights_csv(weights_path);
    const SectorShares shares = sector_weight(weights, year);
    curve = pool_national(curve, urban_curve, shares.rural);
  }
  if (scale == "level") curve = to_level_scale(curve);

  if (common.out.empty()) raise(Errc::bad_input, "kde writes a CSV curve; pass --out <path>");
  write_curve_csv(common.out, curve);
  std::fprintf(stderr, "bandwidth %.4f, %zu grid points, mass %.4f\n", curve.bandwidth,
               curve.grid.size(), trapezoid_mass(curve));
  return 0;
}

int cmd_trend(const std::string& path, const CommonFlags& common, const std::string& column,
              bool params_mode, const std::string& encoding_name, bool quadratic) {
  const csv::Table table = csv::read_file(path);
  const TimeEncoding encoding =
      encoding_name == "span-mid" ? TimeEncoding::span_mid : TimeEncoding::label_mid;

  std::vector<double> times;
  const bool has_midpoint = table.has_column("midpoint");
  const std::size_t time_col = has_midpoint ? table.column("midpoint") : table.column("round");
  std::size_t row_index = 1;
  for (const auto& row : table.rows) {
    ++row_index;
    times.push_back(has_midpoint ? csv::to_number(row[time_col], row_index)
                                 : parse_round_midpoint(row[time_col], encoding));
  }

  auto series_of = [&](const std::string& name) {
    const std::size_t col = table.column(name);
    std::vector<double> values;
    std::size_t r = 1;
    for (const auto& row : table.rows) values.push_back(csv::to_number(row[col], ++r));
    return values;
  };

  json out;
  out["time_encoding"] = has_midpoint ? "explicit-midpoint" : encoding_name;
  if (params_mode) {
    json grid;
    std::printf("%-8s %12s %10s %10s %8s\n", "param", "slope", "p-value", "r2", "n");
    for (const char* name : {"x_M", "sigma2", "nu", "x0", "pi"}) {
      const TrendResult trend = linear_trend(times, series_of(name));
      grid[name] = trend_result_to_json(trend);
      std::printf("%-8s %12.4f %10.4f %10.4f %8d\n", name, trend.slope, trend.slope_p_value,
                  trend.r2, trend.n);
    }
    out["trends"] = grid;
  } else {
    if (column.empty()) raise(Errc::bad_input, "trend needs --column <name> or --params");
    const std::vector<double> values = series_of(column);
    const TrendResult trend = linear_trend(times, values);
    out["column"] = column;
    out["trend"] = trend_result_to_json(trend);
    if (quadratic) {
      const QuadraticTrendResult q = quadratic_trend(times, values);
      out["quadratic"] = {{"intercept", q.intercept}, {"slope", q.slope},
                          {"curvature", q.curvature}, {"r2", q.r2},
                          {"error_variance", q.error_variance}, {"n", q.n}};
    }
    std::printf("%s: slope %.4f, p %.4f, r2 %.4f, ci95 [%.4f, %.4f]\n", column.c_str(),
                trend.slope, trend.slope_p_value, trend.r2, trend.ci95[0], trend.ci95[1]);
  }
  out["provenance"] = provenance_block(path, common.seed);
  emit(out, common);
  return 0;
}

int cmd_simulate(const CommonFlags& common, const std::string& spec_path, std::size_t n,
                 int repeat, const std::vector<std::string>& overrides,
                 std::vector<double> tops) {
  DistributionSpec spec = load_spec_json(spec_path);
  if (!overrides.empty()) {
    json j = spec_to_json(spec);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) raise(Errc::bad_input, "--override expects key=value");
      const std::string key = kv.substr(0, eq);
      if (!j["params"].contains(key))
        raise(Errc::bad_input, "unknown parameter '" + key + "' for this family");
      j["params"][key] = std::stod(kv.substr(eq + 1));
    }
    spec = spec_from_json(j);
  }

  json runs = json::array();
  double gini_sum = 0.0;
  for (int r = 0; r < repeat; ++r) {
    const std::uint64_t seed = repeat == 1 ? common.seed : derive_seed(common.seed, static_cast<std::uint64_t>(r));
    const GiniEstimate g = simulation_gini(spec, n, seed);
    gini_sum += g.value;
    runs.push_back({{"seed", seed}, {"gini", g.value}});
  }

  json top_shares = json::object();
  for (double f : tops) {
    char key[32];
    std::snprintf(key, sizeof key, "%g", f);
    top_shares[key] = top_share(spec, f, n, common.seed);
  }

  json out = {{"spec", spec_to_json(spec)},
              {"n", n},
              {"repeat", repeat},
              {"gini_mean", gini_sum / repeat},
              {"runs", runs},
              {"top_shares", top_shares},
              {"provenance", provenance_block(spec_path, common.seed)}};
  emit(out, common);
  std::fprintf(stderr, "Gini: %.2f\n", gini_sum / repeat);
  return 0;
}

int cmd_agents(const CommonFlags& common, std::size_t n, double kappa, long tau_fixed,
               double tau_mean, const std::string& ratio_text, double hill_fraction,
               const std::string& sample_out) {
  AgentModelConfig config;
  config.n_agents = n;
  config.kappa = kappa;
  config.seed = common.seed;
  if (tau_fixed > 0 && tau_mean > 0)
    raise(Errc::bad_input, "choose either --tau or --tau-mean, not both");
  if (tau_fixed > 0) {
    config.tau = {true, tau_fixed, 0.0};
  } else if (tau_mean > 0) {
    config.tau = {false, 0, tau_mean};
  } else {
    raise(Errc::bad_input, "agents needs --tau <count> or --tau-mean <mean>");
  }
  config.ratios = RatioDist::parse(ratio_text);

  const std::vector<double> consumption = simulate_consumption(config);
  if (!sample_out.empty()) write_sample_csv(sample_out, consumption);

  double mean = 0.0;
  for (double c : consumption) mean += c;
  mean /= static_cast<double>(consumption.size());

  json out = {{"n_agents", n},
              {"kappa", kappa},
              {"tau", tau_fixed > 0 ? json{{"fixed", tau_fixed}} : json{{"geometric_mean", tau_mean}}},
              {"ratios", config.ratios.describe()},
              {"mean_consumption", mean},
              {"provenance", provenance_block("", common.seed)}};
  if (hill_fraction > 0.0)
    out["hill_tail_exponent"] = tail_exponent_hill(consumption, hill_fraction);
  if (!sample_out.empty()) out["sample_csv"] = sample_out;
  emit(out, common);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavy-tailed expenditure distribution toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // fit
  InputFlags fit_input;
  CommonFlags fit_common;
  std::string fit_family, fit_method = "chi2", fit_init;
  auto* fit = app.add_subcommand("fit", "fit a parametric family by chi2 minimum distance");
  add_input(fit, fit_input);
  add_common(fit, fit_common);
  fit->add_option("--family", fit_family,
                  "lognormal|pareto|mixture|double_pareto|exponential|gamma|weibull");
  fit->add_option("--method", fit_method, "chi2 (default) or weibull-grid")
      ->check(CLI::IsMember({"chi2", "weibull-grid"}));
  fit->add_option("--init", fit_init, "JSON spec used as the sole optimizer start");

  // gof
  InputFlags gof_input;
  CommonFlags gof_common;
  std::string gof_family, gof_spec, gof_stat = "ks";
  int gof_replicates = kDefaultReplicates;
  double gof_observed = std::numeric_limits<double>::quiet_NaN();
  auto* gof = app.add_subcommand("gof", "Monte-Carlo goodness-of-fit test");
  add_input(gof, gof_input);
  add_common(gof, gof_common);
  gof->add_option("--family", gof_family, "fit this family first, then test it");
  gof->add_option("--spec", gof_spec, "JSON spec to test (skips fitting)");
  gof->add_option("--statistic", gof_stat, "ks|chi2")->check(CLI::IsMember({"ks", "chi2"}));
  gof->add_option("--replicates", gof_replicates, "Monte-Carlo replicates (default 1000)");
  gof->add_option("--observed", gof_observed, "test this observed value instead of computing it");

  // gini
  InputFlags gini_input;
  CommonFlags gini_common;
  std::string gini_lorenz;
  auto* gini = app.add_subcommand("gini", "Lorenz curve and Gini coefficient from grouped data");
  add_input(gini, gini_input);
  add_common(gini, gini_common);
  gini->add_option("--lorenz", gini_lorenz, "also write the Lorenz curve CSV here");

  // kde
  std::vector<std::string> kde_inputs;
  InputFlags kde_proto;
  CommonFlags kde_common;
  double kde_bandwidth = 0.0, kde_year = std::numeric_limits<double>::quiet_NaN();
  bool kde_truncated = false;
  std::string kde_scale = "level", kde_weights;
  std::size_t kde_points = 512;
  auto* kde = app.add_subcommand("kde", "grouped kernel density curve (CSV for plotting)");
  kde->add_option("inputs", kde_inputs, "grouped CSV; pass rural then urban to pool")->required();
  kde->add_option("--unit", kde_proto.unit, "frequency column to use")
      ->check(CLI::IsMember({"household", "person"}))
      ->required();
  kde->add_option("--round", kde_proto.round, "round label (default: file stem)");
  kde->add_option("--deflators", kde_proto.deflators, "CSV round_label,index");
  add_common(kde, kde_common);
  kde->add_option("--bandwidth", kde_bandwidth, "kernel bandwidth on the log scale");
  kde->add_flag("--truncated", kde_truncated, "restrict each kernel to its class limits");
  kde->add_option("--scale", kde_scale, "level (linear axes) or log (log density grid)")
      ->check(CLI::IsMember({"level", "log"}));
  kde->add_option("--points", kde_points, "grid points (default 512)");
  kde->add_option("--weights", kde_weights, "census counts CSV year,rural_count,urban_count");
  kde->add_option("--year", kde_year, "year at which to interpolate sector weights");

  // trend
  std::string trend_path, trend_column, trend_encoding = "label-mid";
  CommonFlags trend_common;
  bool trend_params = false, trend_quadratic = false;
  auto* trend = app.add_subcommand("trend", "least-squares linear trend with slope test");
  trend->add_option("input", trend_path, "CSV with a 'midpoint' or 'round' time column")->required();
  add_common(trend, trend_common);
  trend->add_option("--column", trend_column, "value column to regress");
  trend->add_flag("--params", trend_params, "regress all five mixture parameters");
  trend->add_option("--time-encoding", trend_encoding,
                    "round label encoding: label-mid (YYYY -> YYYY.5) or span-mid")
      ->check(CLI::IsMember({"label-mid", "span-mid"}));
  trend->add_flag("--quadratic", trend_quadratic, "also fit a quadratic time polynomial");

  // simulate
  CommonFlags sim_common;
  std::string sim_spec;
  std::size_t sim_n = 1000000;
  int sim_repeat = 1;
  std::vector<std::string> sim_overrides;
  std::vector<double> sim_tops;
  auto* sim = app.add_subcommand("simulate", "draw from a spec; report Gini and top shares");
  add_common(sim, sim_common);
  sim->add_option("--spec", sim_spec, "JSON distribution spec")->required();
  sim->add_option("--n", sim_n, "number of draws (default 1e6)");
  sim->add_option("--repeat", sim_repeat, "independent runs; reports the mean Gini");
  sim->add_option("--override", sim_overrides, "param=value tweaks, e.g. --override nu=2.5");
  sim->add_option("--top", sim_tops, "top-share fractions, e.g. --top 0.1 --top 0.2");

  // agents
  CommonFlags agents_common;
  std::size_t agents_n = 100000;
  double agents_kappa = 1.0, agents_tau_mean = 0.0, agents_hill = 0.0;
  long agents_tau = 0;
  std::string agents_ratio = "uniform:0,0.01", agents_sample_out;
  auto* agents = app.add_subcommand("agents", "Cobb-Douglas consumption simulator");
  add_common(agents, agents_common);
  agents->add_option("--n", agents_n, "number of agents");
  agents->add_option("--kappa", agents_kappa, "necessity expenditure");
  agents->add_option("--tau", agents_tau, "fixed number of goods (>= 2)");
  agents->add_option("--tau-mean", agents_tau_mean, "mean of the geometric good count");
  agents->add_option("--ratio", agents_ratio, "taste ratio law, e.g. uniform:0,0.01");
  agents->add_option("--hill", agents_hill, "report the Hill tail exponent over this top fraction");
  agents->add_option("--sample-out", agents_sample_out, "write the consumption sample CSV here");

  try {
    app.parse(argc, argv);
    if (fit->parsed()) return cmd_fit(fit_input, fit_common, fit_family, fit_method, fit_init);
    if (gof->parsed()) {
      std::optional<double> observed;
      if (!std::isnan(gof_observed)) observed = gof_observed;
      return cmd_gof(gof_input, gof_common, gof_family, gof_spec, gof_stat, gof_replicates,
                     observed);
    }
    if (gini->parsed()) return cmd_gini(gini_input, gini_common, gini_lorenz);
    if (kde->parsed())
      return cmd_kde(kde_inputs, kde_proto, kde_common, kde_bandwidth, kde_truncated, kde_scale,
                     kde_points, kde_weights, kde_year);
    if (trend->parsed())
      return cmd_trend(trend_path, trend_common, trend_column, trend_params, trend_encoding,
                       trend_quadratic);
    if (sim->parsed()) {
      if (sim_tops.empty()) sim_tops = {0.1, 0.2};
      return cmd_simulate(sim_common, sim_spec, sim_n, sim_repeat, sim_overrides, sim_tops);
    }
    if (agents->parsed())
      return cmd_agents(agents_common, agents_n, agents_kappa, agents_tau, agents_tau_mean,
                        agents_ratio, agents_hill, agents_sample_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are input errors
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
