#include <array>
#include <string>

#include "cli_io.hpp"
#include "regmean/cli.hpp"
#include "regmean/distributions.hpp"
#include "regmean/simulation.hpp"

namespace regmean {
namespace {

using detail::json;

constexpr std::array<const char*, 3> kFigure1Generators = {"identity", "log", "reciprocal"};

struct Scenario {
  const char* label;
  DistributionModel dist;
};

std::array<Scenario, 4> figure1_scenarios() {
  return {{{"A", DistributionModel::lognormal(2.0, 1.0)},
           {"B", DistributionModel::gamma(100.0, 1.0)},
           {"C", DistributionModel::uniform(1.0, 2.0)},
           {"D", DistributionModel::pareto(10.0)}}};
}

FigureCell run_cell(const FigureOptions& options, const std::string& scenario,
                    const DistributionModel& dist, const std::string& generator,
                    const std::string& command, SimulationReport* keep = nullptr) {
  ScenarioConfig cfg{dist, parse_generator(generator), options.n, options.replicates,
                     options.seed};
  RunOptions run;
  run.threads = options.threads;
  run.variant = options.variant;
  const SimulationReport report = run_scenario(cfg, run);

  FigureCell cell;
  cell.scenario = scenario;
  cell.dist = dist.to_string();
  cell.generator = generator;
  cell.directory = scenario + "_" + generator;
  cell.eg = report.asymptotic.eg;
  cell.asym_var = report.asymptotic.asym_var;
  cell.empirical_var = report.empirical_var;
  cell.ks = report.ks_vs_normal;
  cell.statistic_skewness = report.statistic_skewness;
  cell.edgeworth_sup_gap = report.edgeworth_sup_gap;

  const std::filesystem::path dir = options.out_dir / cell.directory;
  detail::write_text(dir / "hist.csv", detail::hist_csv(histogram(report.statistics)));
  json j = detail::simulation_json(report, command, "standardized");
  j["statistic_skewness"] = detail::number(report.statistic_skewness);
  detail::write_text(dir / "report.json", j.dump(2) + "\n");
  if (keep) *keep = report;
  return cell;
}

std::string optional_field(const std::optional<double>& v) { return v ? format17(*v) : ""; }

const char* kPlotFigure1 = R"(import csv
import os
import sys

import matplotlib.pyplot as plt

root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(root, "summary.csv")) as f:
    rows = list(csv.DictReader(f))
scenarios = sorted({r["scenario"] for r in rows})
generators = ["identity", "log", "reciprocal"]
fig, axes = plt.subplots(len(scenarios), len(generators), figsize=(12, 3 * len(scenarios)))
for i, s in enumerate(scenarios):
    for j, g in enumerate(generators):
        ax = axes[i][j]
        with open(os.path.join(root, f"{s}_{g}", "hist.csv")) as f:
            bins = list(csv.DictReader(f))
        total = sum(int(b["count"]) for b in bins)
        lo = [float(b["bin_lo"]) for b in bins]
        width = [float(b["bin_hi"]) - float(b["bin_lo"]) for b in bins]
        dens = [int(b["count"]) / (total * w) for b, w in zip(bins, width)]
        mid = [l + w / 2 for l, w in zip(lo, width)]
        ax.bar(lo, dens, width=width, align="edge", alpha=0.5)
        ax.plot(mid, [float(b["normal_density_at_mid"]) for b in bins], "r-")
        ax.set_title(f"{s} / {g}")
fig.tight_layout()
fig.savefig(os.path.join(root, "figure1.png"), dpi=120)
)";

}  // namespace

std::vector<FigureCell> reproduce_figure1(const FigureOptions& options) {
  std::vector<FigureCell> cells;
  for (const Scenario& s : figure1_scenarios()) {
    for (const char* g : kFigure1Generators) {
      cells.push_back(run_cell(options, s.label, s.dist, g, "reproduce-figure1"));
    }
  }
  std::string csv =
      "scenario,dist,generator,n,replicates,eg,asym_var,empirical_var,var_ratio,ks,"
      "edgeworth_sup_gap\n";
  for (const FigureCell& c : cells) {
    csv += c.scenario + ',' + c.dist + ',' + c.generator + ',' + std::to_string(options.n) + ',' +
           std::to_string(options.replicates) + ',' + format17(c.eg) + ',' +
           format17(c.asym_var) + ',' + format17(c.empirical_var) + ',' +
           format17(c.empirical_var / c.asym_var) + ',' + format17(c.ks) + ',' +
           optional_field(c.edgeworth_sup_gap) + '\n';
  }
  detail::write_text(options.out_dir / "summary.csv", csv);
  if (options.plot_script) detail::write_text(options.out_dir / "plot_figure1.py", kPlotFigure1);
  return cells;
}

Figure2Result reproduce_figure2(const FigureOptions& options) {
  const DistributionModel dist = DistributionModel::lognormal(2.0, 6.25);
  Figure2Result out;
  SimulationReport identity_report{ScenarioConfig{dist, parse_generator("identity")}};
  SimulationReport log_report{ScenarioConfig{dist, parse_generator("log")}};
  out.identity = run_cell(options, "lognormal", dist, "identity", "reproduce-figure2",
                          &identity_report);
  out.log = run_cell(options, "lognormal", dist, "log", "reproduce-figure2", &log_report);

  out.ordering_holds = out.log.ks < out.identity.ks;
  out.log_below_005 = out.log.ks < 0.05;
  out.ks_ratio = out.identity.ks / out.log.ks;
  out.ratio_target_met = out.ks_ratio >= 2.0;

  const Interval range(-4.0, 4.0);
  const std::size_t steps = 161;
  json edgeworth;
  for (const auto* r : {&identity_report, &log_report}) {
    if (!r->moments || !r->moments->skew_g) continue;
    const detail::EdgeworthTable t =
        detail::edgeworth_table(range, steps, options.n, *r->moments, options.variant);
    const std::string name = r->config.generator.name();
    detail::write_text(options.out_dir / ("edgeworth_" + name + ".csv"), detail::edgeworth_csv(t));
    (r == &log_report ? out.log_max_abs_correction : out.identity_max_abs_correction) =
        t.max_abs_correction;
    json e;
    e["skew_g"] = detail::number(*r->moments->skew_g);
    e["exkurt_g"] = detail::number(r->moments->exkurt_g.value_or(0.0));
    e["max_abs_correction"] = detail::number(t.max_abs_correction);
    edgeworth[name] = e;
  }

  json config;
  config["dist"] = dist.to_string();
  config["generators"] = {"identity", "log"};
  config["n"] = options.n;
  config["replicates"] = options.replicates;
  json j;
  j["metadata"] = detail::metadata("reproduce-figure2", options.seed, config);
  j["ks_identity"] = detail::number(out.identity.ks);
  j["ks_log"] = detail::number(out.log.ks);
  j["ordering_holds"] = out.ordering_holds;
  j["ks_log_below_0.05"] = out.log_below_005;
  j["ks_ratio"] = detail::number(out.ks_ratio);
  j["ks_ratio_at_least_2"] = out.ratio_target_met;
  j["identity_statistic_skewness"] = detail::number(out.identity.statistic_skewness);
  j["log_statistic_skewness"] = detail::number(out.log.statistic_skewness);
  j["edgeworth"] = edgeworth;
  detail::write_text(options.out_dir / "summary.json", j.dump(2) + "\n");
  return out;
}

}  // namespace regmean
