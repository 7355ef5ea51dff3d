#include "expdist/estimation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

#include "expdist/errors.hpp"
#include "expdist/rng.hpp"

namespace expdist {

std::vector<double> expected_class_counts(const DistributionSpec& spec,
                                          const GroupedSample& sample, Unit unit) {
  (void)unit;  // expected counts depend on the class limits only
  validate_params(spec);
  const auto& classes = sample.classes;
  std::vector<double> expected(classes.size());
  double prev = cdf(spec, classes.front().lower);
  for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
    const double next = cdf(spec, classes[i].upper);
    expected[i] = 1000.0 * (next - prev);
    prev = next;
  }
  expected.back() = 1000.0 * (1.0 - prev);
  return expected;
}

namespace {

constexpr double kMergeThreshold = 1e-6;

}  // namespace

double chi2_statistic(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size())
    raise(Errc::length_mismatch, "observed and predicted lengths differ");
  if (observed.empty()) raise(Errc::length_mismatch, "empty inputs");

  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> pred(predicted.begin(), predicted.end());

  // merge under-predicted cells into the right neighbor (last cell: left)
  for (std::size_t i = 0; i < pred.size();) {
    if (pred[i] >= kMergeThreshold || pred.size() == 1) {
      ++i;
      continue;
    }
    const std::size_t into = i + 1 < pred.size() ? i + 1 : i - 1;
    pred[into] += pred[i];
    obs[into] += obs[i];
    pred.erase(pred.begin() + static_cast<std::ptrdiff_t>(i));
    obs.erase(obs.begin() + static_cast<std::ptrdiff_t>(i));
    if (into < i) i = into;  // re-examine the merged cell
  }
  // a single merged super-cell always matches its own total; that is not a
  // goodness-of-fit comparison, so reject it
  if (pred.size() < 2)
    raise(Errc::degenerate_prediction,
          "predicted counts leave fewer than 2 usable cells after merging");

  double stat = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = obs[i] - pred[i];
    stat += d * d / pred[i];
  }
  return stat;
}

namespace {

// ---- parameter transforms: optimizer works in unconstrained coordinates ----

double logit(double p) {
  const double c = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return std::log(c / (1.0 - c));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::vector<double> to_coords(const DistributionSpec& spec) {
  switch (family_of(spec)) {
    case Family::lognormal: {
      const auto& p = std::get<LognormalParams>(spec);
      return {std::log(p.x_M), std::log(p.sigma2)};
    }
    case Family::pareto: {
      const auto& p = std::get<ParetoParams>(spec);
      return {std::log(p.nu), std::log(p.x0)};
    }
    case Family::mixture: {
      const auto& p = std::get<MixtureParams>(spec);
      return {std::log(p.x_M), std::log(p.sigma2), std::log(p.nu), std::log(p.x0), logit(p.pi)};
    }
    case Family::double_pareto: {
      const auto& p = std::get<DoubleParetoParams>(spec);
      return {std::log(p.alpha), std::log(p.beta), std::log(p.scale)};
    }
    case Family::exponential:
      return {std::log(std::get<ExponentialParams>(spec).rate)};
    case Family::gamma: {
      const auto& p = std::get<GammaParams>(spec);
      return {std::log(p.shape), std::log(p.scale)};
    }
    case Family::weibull: {
      const auto& p = std::get<WeibullParams>(spec);
      return {std::log(p.k), std::log(p.lambda)};
    }
  }
  raise(Errc::invalid_params, "unknown family");
}

DistributionSpec from_coords(Family family, std::span<const double> t) {
  switch (family) {
    case Family::lognormal:
      return LognormalParams{std::exp(t[0]), std::exp(t[1])};
    case Family::pareto:
      return ParetoParams{std::exp(t[0]), std::exp(t[1])};
    case Family::mixture:
      return MixtureParams{std::exp(t[0]), std::exp(t[1]), std::exp(t[2]), std::exp(t[3]),
                           sigmoid(t[4])};
    case Family::double_pareto:
      return DoubleParetoParams{std::exp(t[0]), std::exp(t[1]), std::exp(t[2])};
    case Family::exponential:
      return ExponentialParams{std::exp(t[0])};
    case Family::gamma:
      return GammaParams{std::exp(t[0]), std::exp(t[1])};
    case Family::weibull:
      return WeibullParams{std::exp(t[0]), std::exp(t[1])};
  }
  raise(Errc::invalid_params, "unknown family");
}

// ---- Nelder-Mead on an unconstrained objective ----

struct SimplexResult {
  std::vector<double> x;
  double fx = std::numeric_limits<double>::infinity();
  bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> start, double step, double tol,
                          int max_evals) {
  const std::size_t d = start.size();
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(d + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  bool converged = false;

  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(),
                      second_worst = order[d > 0 ? d - 1 : 0];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        diameter = std::max(diameter, std::fabs(pts[order[i]][j] - pts[best][j]));
    if (diameter < tol) {
      converged = true;
      break;
    }

    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= d; ++i)
        if (i != worst) s += pts[i][j];
      centroid[j] = s / static_cast<double>(d);
    }

    for (std::size_t j = 0; j < d; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
    const double fr = eval(xr);

    if (fr < fv[best]) {
      for (std::size_t j = 0; j < d; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      if (outside) {
        for (std::size_t j = 0; j < d; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
      } else {
        for (std::size_t j = 0; j < d; ++j)
          xc[j] = centroid[j] - 0.5 * (centroid[j] - pts[worst][j]);
      }
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {  // shrink toward the best vertex
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < d; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          fv[i] = eval(pts[i]);
          if (evals >= max_evals) break;
        }
      }
    }
  }

  const std::size_t best =
      static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return {pts[best], fv[best], converged};
}

// ---- start grids ----

struct SampleStats {
  double median_mean = 0.0;   // class mean (or midpoint) of the median class
  double log_var = 0.1;       // frequency-weighted variance of log class centers
  double weighted_mean = 1.0;
};

double class_center(const ExpenditureClass& cls) {
  if (cls.class_mean) return *cls.class_mean;
  return cls.open_top() ? 1.5 * cls.lower : cls.midpoint();
}

SampleStats compute_stats(const GroupedSample& sample, Unit unit) {
  SampleStats stats;
  const double total = static_cast<double>(sample.total_freq(unit));
  double cum = 0.0;
  bool median_set = false;
  double mean_log = 0.0, mean = 0.0;
  for (const auto& cls : sample.classes) {
    const double w = static_cast<double>(cls.freq(unit)) / total;
    const double c = class_center(cls);
    mean += w * c;
    mean_log += w * std::log(c);
    cum += static_cast<double>(cls.freq(unit));
    if (!median_set && cum >= 0.5 * total) {
      stats.median_mean = c;
      median_set = true;
    }
  }
  double var_log = 0.0;
  for (const auto& cls : sample.classes) {
    const double w = static_cast<double>(cls.freq(unit)) / total;
    const double d = std::log(class_center(cls)) - mean_log;
    var_log += w * d * d;
  }
  stats.log_var = std::clamp(var_log, 1e-3, 5.0);
  stats.weighted_mean = mean;
  return stats;
}

std::vector<DistributionSpec> start_grid(const GroupedSample& sample, Family family, Unit unit) {
  const SampleStats stats = compute_stats(sample, unit);
  const std::vector<double> boundaries = sample.interior_limits();
  std::vector<DistributionSpec> starts;
  switch (family) {
    case Family::mixture:
      for (double x0 : boundaries)
        for (double pi : {0.05, 0.15, 0.30})
          for (double nu : {1.5, 2.5})
            starts.push_back(MixtureParams{stats.median_mean, stats.log_var, nu, x0, pi});
      break;
    case Family::lognormal:
      for (double m : {stats.median_mean, stats.weighted_mean})
        for (double s2 : {stats.log_var, 2.0 * stats.log_var})
          starts.push_back(LognormalParams{m, s2});
      break;
    case Family::pareto:
      for (double x0 : boundaries)
        for (double nu : {1.5, 2.5}) starts.push_back(ParetoParams{nu, x0});
      break;
    case Family::double_pareto: {
      std::vector<double> scales = boundaries;
      scales.push_back(stats.median_mean);
      for (double s : scales)
        for (double a : {1.0, 2.0})
          for (double b : {1.0, 2.0}) starts.push_back(DoubleParetoParams{a, b, s});
      break;
    }
    case Family::exponential:
      for (double f : {0.5, 1.0, 2.0})
        starts.push_back(ExponentialParams{f / stats.weighted_mean});
      break;
    case Family::gamma: {
      const double m = stats.weighted_mean;
      const double v = std::max(stats.log_var, 1e-3) * m * m;  // crude spread proxy
      for (double f : {0.5, 1.0, 2.0})
        starts.push_back(GammaParams{f * m * m / v, v / m});
      break;
    }
    case Family::weibull:
      for (double k : {1.0, 2.0, 4.0})
        starts.push_back(WeibullParams{k, stats.weighted_mean / std::tgamma(1.0 + 1.0 / k)});
      break;
  }
  return starts;
}

}  // namespace

FitResult fit_chi2(const GroupedSample& sample, Family family, Unit unit,
                   const FitOptions& options) {
  const int n_params = free_parameter_count(family);
  if (sample.classes.size() < static_cast<std::size_t>(n_params) + 1)
    raise(Errc::too_few_classes, "fit needs at least " + std::to_string(n_params + 1) +
                                     " classes for the " + family_name(family) + " family");

  std::vector<double> observed;
  observed.reserve(sample.classes.size());
  for (const auto& cls : sample.classes)
    observed.push_back(static_cast<double>(cls.freq(unit)));

  const auto objective = [&](std::span<const double> coords) -> double {
    for (double c : coords)
      if (!std::isfinite(c) || std::fabs(c) > 700.0) return std::numeric_limits<double>::infinity();
    const DistributionSpec spec = from_coords(family, coords);
    try {
      return chi2_statistic(observed, expected_class_counts(spec, sample, unit));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<DistributionSpec> starts;
  if (options.single_start) {
    if (family_of(*options.single_start) != family)
      raise(Errc::invalid_config, "single_start family does not match the requested family");
    starts.push_back(*options.single_start);
  } else {
    starts = start_grid(sample, family, unit);
  }
  if (starts.empty()) raise(Errc::optimizer_failure, "no start points");

  std::vector<std::vector<double>> coords;
  coords.reserve(starts.size());
  for (const auto& s : starts) coords.push_back(to_coords(s));
  if (options.seed != 0) {
    RandomStream jitter(options.seed);
    for (auto& c : coords)
      for (double& v : c) v += 0.05 * (2.0 * jitter.uniform01() - 1.0);
  }

  std::vector<SimplexResult> results(coords.size());
  auto run_start = [&](std::size_t i) {
    results[i] = nelder_mead(objective, coords[i], 0.25, options.simplex_tol,
                             options.max_evals_per_start);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (options.parallel_starts && coords.size() > 1 && hw > 1) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < coords.size(); i = next.fetch_add(1))
        run_start(i);
    };
    std::vector<std::future<void>> pool;
    const unsigned n_workers = std::min<unsigned>(hw, static_cast<unsigned>(coords.size()));
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w)
      pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  } else {
    for (std::size_t i = 0; i < coords.size(); ++i) run_start(i);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].fx < results[best].fx) best = i;

  const bool any_converged =
      std::any_of(results.begin(), results.end(), [](const SimplexResult& r) { return r.converged; });
  if (!any_converged) raise(Errc::optimizer_failure, "no optimizer start converged");
  if (!std::isfinite(results[best].fx))
    raise(Errc::optimizer_failure, "objective not finite at any optimum");

  FitResult fit;
  fit.spec = from_coords(family, results[best].x);
  fit.chi2 = results[best].fx;
  fit.n_classes = static_cast<int>(sample.classes.size());
  fit.n_params = n_params;
  fit.starts_tried = static_cast<int>(starts.size());
  fit.converged = results[best].converged;
  if (family == Family::mixture) {
    const double pi = std::get<MixtureParams>(fit.spec).pi;
    fit.near_boundary = pi < 1e-3 || pi > 1.0 - 1e-3;
  }
  return fit;
}

namespace {

struct Ols3 {
  std::array<double, 3> beta{};
  double r2 = 0.0;
  bool ok = false;
};

// Least squares for y on [1, x1, x2] via standardized normal equations.
Ols3 ols3(std::span<const double> x1, std::span<const double> x2, std::span<const double> y) {
  const std::size_t n = y.size();
  Ols3 out;
  if (n < 4) return out;
  auto moments = [n](std::span<const double> v) {
    double m = 0.0;
    for (double t : v) m += t;
    m /= static_cast<double>(n);
    double s = 0.0;
    for (double t : v) s += (t - m) * (t - m);
    return std::pair{m, std::sqrt(s / static_cast<double>(n))};
  };
  const auto [m1, s1] = moments(x1);
  const auto [m2, s2] = moments(x2);
  if (!(s1 > 0.0) || !(s2 > 0.0)) return out;

  // correlations of standardized regressors
  double c12 = 0.0, c1y = 0.0, c2y = 0.0, my = 0.0;
  for (double t : y) my += t;
  my /= static_cast<double>(n);
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = (x1[i] - m1) / s1;
    const double z2 = (x2[i] - m2) / s2;
    const double dy = y[i] - my;
    c12 += z1 * z2;
    c1y += z1 * dy;
    c2y += z2 * dy;
    syy += dy * dy;
  }
  c12 /= static_cast<double>(n);
  c1y /= static_cast<double>(n);
  c2y /= static_cast<double>(n);
  const double det = 1.0 - c12 * c12;
  if (std::fabs(det) < 1e-12 || !(syy > 0.0)) return out;

  const double b1z = (c1y - c12 * c2y) / det;
  const double b2z = (c2y - c12 * c1y) / det;
  const double b1 = b1z / s1;
  const double b2 = b2z / s2;
  const double b0 = my - b1 * m1 - b2 * m2;

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (b0 + b1 * x1[i] + b2 * x2[i]);
    sse += r * r;
  }
  out.beta = {b0, b1, b2};
  out.r2 = 1.0 - sse / syy;
  out.ok = true;
  return out;
}

}  // namespace

std::vector<double> default_weibull_grid() {
  std::vector<double> grid;
  for (int i = 10; i <= 50; ++i) grid.push_back(static_cast<double>(i) / 10.0);
  return grid;
}

WeibullGridFit fit_weibull_grid(const GroupedSample& sample, Unit unit,
                                std::span<const double> k_grid) {
  if (k_grid.empty()) raise(Errc::bad_input, "empty k grid");
  for (double k : k_grid)
    if (!(k >= 1.0 && k <= 5.0)) raise(Errc::bad_input, "k grid must lie within [1, 5]");
  if (!sample.has_all_means())
    raise(Errc::missing_class_means, "weibull grid fit needs class means");

  // log frequency at class midpoints, open top class excluded
  std::vector<double> mids, logx, y;
  for (const auto& cls : sample.classes) {
    if (cls.open_top() || cls.freq(unit) <= 0) continue;
    mids.push_back(cls.midpoint());
    logx.push_back(std::log(cls.midpoint()));
    y.push_back(std::log(static_cast<double>(cls.freq(unit)) / 1000.0));
  }
  if (mids.size() < 4)
    raise(Errc::singular_regression, "need at least 4 closed classes with positive frequency");

  WeibullGridFit best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
  std::vector<double> xk(mids.size());
  for (double k : k_grid) {
    for (std::size_t i = 0; i < mids.size(); ++i) xk[i] = std::pow(mids[i], k);
    const Ols3 fit = ols3(logx, xk, y);
    if (!fit.ok || !(fit.beta[2] < 0.0)) continue;  // lambda only recoverable from c < 0
    if (fit.r2 > best.r2) best = {k, std::pow(-fit.beta[2], -1.0 / k), fit.r2};
  }
  if (!(best.r2 > -std::numeric_limits<double>::infinity()))
    raise(Errc::singular_regression, "no grid point produced a usable fit");
  return best;
}

}  // namespace expdist
