#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regmean/cli.hpp"
#include "regmean/errors.hpp"
#include "regmean/format.hpp"
#include "regmean/simulation.hpp"

namespace regmean::detail {

using json = nlohmann::ordered_json;

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json metadata(const std::string& command, std::uint64_t seed, json config) {
  json m;
  m["version"] = kVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["config"] = std::move(config);
  return m;
}

inline json scenario_config(const ScenarioConfig& cfg) {
  json c;
  c["dist"] = cfg.dist.to_string();
  c["generator"] = cfg.generator.name();
  c["n"] = cfg.n;
  c["replicates"] = cfg.replicates;
  c["seed"] = cfg.seed;
  return c;
}

inline json simulation_json(const SimulationReport& r, const std::string& command,
                            const std::string& statistic) {
  json config = scenario_config(r.config);
  config["statistic"] = statistic;
  json j;
  j["metadata"] = metadata(command, r.config.seed, config);
  j["config"] = config;
  j["eg"] = number(r.asymptotic.eg);
  j["asym_var"] = number(r.asymptotic.asym_var);
  j["empirical_var"] = number(r.empirical_var);
  j["ks"] = number(r.ks_vs_normal);
  j["edgeworth_sup_gap"] = r.edgeworth_sup_gap ? number(*r.edgeworth_sup_gap) : json(nullptr);
  j["runtime_ms"] = number(r.runtime_ms);
  return j;
}

inline std::string hist_csv(const std::vector<HistogramBin>& bins) {
  std::string s = "bin_lo,bin_hi,count,normal_density_at_mid\n";
  for (const HistogramBin& b : bins) {
    s += format17(b.lo) + ',' + format17(b.hi) + ',' + std::to_string(b.count) + ',' +
         format17(b.normal_density_at_mid) + '\n';
  }
  return s;
}

inline std::vector<HistogramBin> statistic_histogram(const SimulationReport& r,
                                                     const std::string& statistic) {
  if (statistic == "scaled") return histogram(r.scaled, 0.25, std::sqrt(r.asymptotic.asym_var));
  return histogram(r.statistics);
}

struct EdgeworthTable {
  std::vector<double> x;
  std::vector<EdgeworthTerms> terms;
  double max_abs_correction = 0.0;
};

inline EdgeworthTable edgeworth_table(const Interval& range, std::size_t steps, std::size_t n,
                                      const GMoments& mom, EdgeworthVariant variant) {
  EdgeworthTable t;
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = range.grid_point(i, steps);
    const EdgeworthTerms e = edgeworth_terms(x, n, mom, variant);
    for (double c : e.corrections) t.max_abs_correction = std::max(t.max_abs_correction, std::abs(c));
    t.x.push_back(x);
    t.terms.push_back(e);
  }
  return t;
}

inline std::string edgeworth_csv(const EdgeworthTable& t) {
  std::string s = "x,phi_cdf,edgeworth_cdf,correction_1,correction_2,correction_3\n";
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const EdgeworthTerms& e = t.terms[i];
    s += format17(t.x[i]) + ',' + format17(e.normal_cdf) + ',' + format17(e.value);
    for (double c : e.corrections) s += ',' + format17(c);
    s += '\n';
  }
  return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw ConfigurationError("cannot create directory '" + path.parent_path().string() +
                               "': " + ec.message());
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigurationError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.close();
  if (!f) throw ConfigurationError("write to '" + path.string() + "' failed");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigurationError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace regmean::detail
