#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "regmean/asymptotics.hpp"
#include "regmean/distributions.hpp"
#include "regmean/generator.hpp"

namespace regmean {

struct ScenarioConfig {
  DistributionModel dist;
  Generator generator;
  std::size_t n = 1000;           // sample size per replicate
  std::size_t replicates = 1000;
  std::uint64_t seed = 42;
};

struct RunOptions {
  std::size_t threads = 1;
  EdgeworthVariant variant = kDefaultEdgeworthVariant;
};

struct SimulationReport {
  explicit SimulationReport(ScenarioConfig cfg) : config(std::move(cfg)) {}

  ScenarioConfig config;
  /// sqrt(n) (M_g - E_g) / sqrt(asym_var), one per replicate.
  std::vector<double> statistics;
  /// sqrt(n) (M_g - E_g), one per replicate.
  std::vector<double> scaled;
  double ks_vs_normal = 0.0;
  /// Sample variance (divisor N - 1) of `scaled`; 0 for a single replicate.
  double empirical_var = 0.0;
  double statistic_skewness = 0.0;
  AsymptoticSpec asymptotic;
  /// Shape of g(X); empty when its fourth moment is infinite.
  std::optional<GMoments> moments;
  /// KS-type distance of `statistics` to the Edgeworth CDF.
  std::optional<double> edgeworth_sup_gap;
  double runtime_ms = 0.0;
};

/// Monte Carlo check of the limit law of a regular mean. Replicate r draws
/// from RngStream::derive(seed, r), so the statistics do not depend on the
/// thread count.
///
/// Throws ConfigurationError for n < 2, zero replicates, or a law whose
/// support leaves the generator's input range, and DivergenceError when
/// var g(X) is infinite. Both checks run before any sampling.
SimulationReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// sup_i max(|i/N - F(v_(i))|, |(i-1)/N - F(v_(i))|) over the sorted values.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);

  double operator()(double x) const;
  std::size_t size() const noexcept { return sorted_.size(); }

  struct Step {
    double value;
    double cumulative;  // i / N
  };
  std::vector<Step> table() const;

 private:
  std::vector<double> sorted_;
};

struct EdgeworthRow {
  double x;
  double empirical;
  double normal;
  double edgeworth;
};

struct EdgeworthComparison {
  std::vector<EdgeworthRow> rows;
  double normal_sup_gap = 0.0;
  double edgeworth_sup_gap = 0.0;
  bool edgeworth_not_worse = false;
};

/// Empirical CDF of the standardized statistics against Phi and the Edgeworth
/// CDF on `steps` evenly spaced points of `range` (steps >= 2).
EdgeworthComparison compare_edgeworth(const SimulationReport& report, const GMoments& mom,
                                      std::size_t n, const Interval& range, std::size_t steps,
                                      EdgeworthVariant variant = kDefaultEdgeworthVariant);

struct HistogramBin {
  double lo;
  double hi;
  std::size_t count;
  double normal_density_at_mid;
};

/// Fixed-width bins covering [-4 sd, 4 sd] and widened to the data range;
/// the reference density is that of N(0, sd^2).
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width = 0.25,
                                    double sd = 1.0);

double sample_skewness(std::span<const double> values);

}  // namespace regmean
