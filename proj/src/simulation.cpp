#include "regmean/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "regmean/errors.hpp"
#include "regmean/regular_mean.hpp"

namespace regmean {
namespace {

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  CompensatedSum s;
  for (double x : v) s.add(x);
  const double m = s.value() / static_cast<double>(v.size());
  CompensatedSum ss;
  for (double x : v) ss.add((x - m) * (x - m));
  return ss.value() / static_cast<double>(v.size() - 1);
}

}  // namespace

double sample_skewness(std::span<const double> values) {
  if (values.size() < 3) return 0.0;
  CompensatedSum s;
  for (double x : values) s.add(x);
  const double n = static_cast<double>(values.size());
  const double m = s.value() / n;
  CompensatedSum s2, s3;
  for (double x : values) {
    const double d = x - m;
    s2.add(d * d);
    s3.add(d * d * d);
  }
  const double var = s2.value() / n;
  if (!(var > 0.0)) return 0.0;
  return (s3.value() / n) / std::pow(var, 1.5);
}

SimulationReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.n < 2) throw ConfigurationError("scenario sample size must be >= 2");
  if (cfg.replicates < 1) throw ConfigurationError("scenario needs at least one replicate");
  const Generator& g = cfg.generator;
  if (!g.domain().includes(cfg.dist.support())) {
    throw ConfigurationError("support " + cfg.dist.support().to_string() + " of " +
                             cfg.dist.to_string() + " is not inside the input range " +
                             g.domain().to_string() + " of generator '" + g.name() + "'");
  }

  SimulationReport report{cfg};
  report.asymptotic = asymptotic_variance(g, cfg.dist);
  if (!(report.asymptotic.asym_var > 0.0)) {
    throw ConfigurationError("asymptotic variance is zero for " + cfg.dist.to_string());
  }
  try {
    report.moments = g_moments(g, cfg.dist);
  } catch (const DivergenceError&) {
    report.moments.reset();
  }

  report.statistics.assign(cfg.replicates, 0.0);
  report.scaled.assign(cfg.replicates, 0.0);
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, cfg.replicates);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&](std::size_t first) {
    try {
      std::vector<double> buffer(cfg.n);
      for (std::size_t r = first; r < cfg.replicates; r += threads) {
        RngStream rng = RngStream::derive(cfg.seed, r);
        sample_into(cfg.dist, buffer, rng);
        const double m = mean(g, buffer);
        report.scaled[r] = scaled_error(report.asymptotic, m, cfg.n);
        report.statistics[r] = standardize(report.asymptotic, m, cfg.n);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  if (failure) std::rethrow_exception(failure);

  report.ks_vs_normal = ks_statistic(report.statistics, normal_cdf);
  report.empirical_var = sample_variance(report.scaled);
  report.statistic_skewness = sample_skewness(report.statistics);
  if (report.moments && report.moments->skew_g && report.moments->exkurt_g) {
    const GMoments mom = *report.moments;
    const std::size_t n = cfg.n;
    const EdgeworthVariant variant = options.variant;
    report.edgeworth_sup_gap = ks_statistic(
        report.statistics, [&](double x) { return edgeworth_cdf(x, n, mom, variant); });
  }
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw InvalidParameter("KS statistic needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n;
    const double below = static_cast<double>(i) / n;
    d = std::max({d, std::abs(above - f), std::abs(below - f)});
  }
  return d;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw InvalidParameter("empirical CDF needs at least one value");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<EmpiricalCdf::Step> EmpiricalCdf::table() const {
  std::vector<Step> out;
  out.reserve(sorted_.size());
  const double n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    // Ties collapse onto the last occurrence.
    if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
    out.push_back({sorted_[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

EdgeworthComparison compare_edgeworth(const SimulationReport& report, const GMoments& mom,
                                      std::size_t n, const Interval& range, std::size_t steps,
                                      EdgeworthVariant variant) {
  if (report.statistics.empty()) throw InvalidParameter("comparison needs a nonempty report");
  if (steps < 2) throw InvalidParameter("comparison grid needs at least 2 points");
  const EmpiricalCdf ecdf(report.statistics);
  EdgeworthComparison out;
  out.rows.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = range.grid_point(i, steps);
    const EdgeworthRow row{x, ecdf(x), normal_cdf(x), edgeworth_cdf(x, n, mom, variant)};
    out.normal_sup_gap = std::max(out.normal_sup_gap, std::abs(row.empirical - row.normal));
    out.edgeworth_sup_gap =
        std::max(out.edgeworth_sup_gap, std::abs(row.empirical - row.edgeworth));
    out.rows.push_back(row);
  }
  out.edgeworth_not_worse = out.edgeworth_sup_gap <= out.normal_sup_gap;
  return out;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width,
                                    double sd) {
  if (values.empty()) throw InvalidParameter("histogram needs at least one value");
  if (!(bin_width > 0.0)) throw InvalidParameter("histogram bin width must be positive");
  if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidParameter("histogram sd must be positive");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = std::min(std::floor(-4.0 * sd / bin_width) * bin_width,
                             std::floor(*mn / bin_width) * bin_width);
  const double hi = std::max(std::ceil(4.0 * sd / bin_width) * bin_width,
                             std::ceil(*mx / bin_width) * bin_width);
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  std::vector<HistogramBin> out(std::max<std::size_t>(bins, 1));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].lo = lo + bin_width * static_cast<double>(i);
    out[i].hi = lo + bin_width * static_cast<double>(i + 1);
    out[i].count = 0;
    out[i].normal_density_at_mid = normal_pdf(0.5 * (out[i].lo + out[i].hi) / sd) / sd;
  }
  for (double v : values) {
    auto idx = static_cast<std::ptrdiff_t>(std::floor((v - lo) / bin_width));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(out.size()) - 1);
    ++out[static_cast<std::size_t>(idx)].count;
  }
  return out;
}

}  // namespace regmean
