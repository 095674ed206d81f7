#include "regmean/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <ostream>
#include <span>

#include "cli_io.hpp"
#include "regmean/distributions.hpp"
#include "regmean/portfolio.hpp"
#include "regmean/regular_mean.hpp"
#include "regmean/simulation.hpp"
#include "regmean/stability.hpp"

namespace regmean {
namespace {

using detail::json;
using detail::number;

struct Globals {
  std::uint64_t seed = 42;
  std::string out;
  std::string format;
  std::size_t threads = 1;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::invalid_parameter:
    case ErrorKind::out_of_range:
    case ErrorKind::configuration:
      return 2;
    case ErrorKind::numeric_failure:
    case ErrorKind::divergence:
    case ErrorKind::degenerate:
      return 3;
  }
  return 3;
}

std::vector<double> parse_numbers(std::string_view text, bool allow_header, const std::string& what) {
  std::vector<double> values;
  bool first_line = true;
  for (std::string_view line : split_fields(text, "\n")) {
    const auto fields = split_fields(line, ",; \t\r");
    if (fields.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    for (std::string_view f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) {
        numeric = false;
        if (!(allow_header && first_line)) {
          throw ConfigurationError("cannot parse '" + std::string(f) + "' in " + what +
                                   " as a number");
        }
        break;
      }
      row.push_back(v);
    }
    first_line = false;
    if (numeric) values.insert(values.end(), row.begin(), row.end());
  }
  if (values.empty()) throw ConfigurationError(what + " contains no numbers");
  return values;
}

// A path to an existing file, or an inline list such as "1,2,3".
std::vector<double> load_values(const std::string& arg, const std::string& flag) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    return parse_numbers(detail::read_text(arg), true, "file '" + arg + "'");
  }
  return parse_numbers(arg, false, flag + " '" + arg + "'");
}

std::vector<double> parse_colon_list(const std::string& text, std::size_t count,
                                     const std::string& flag) {
  const auto parts = split_fields(text, ":");
  std::vector<double> v;
  for (std::string_view p : parts) {
    double x = 0.0;
    if (!parse_double(p, x)) break;
    v.push_back(x);
  }
  if (v.size() != count || parts.size() != count) {
    throw ConfigurationError(flag + " expects " + std::to_string(count) +
                             " colon-separated numbers, got '" + text + "'");
  }
  return v;
}

Interval parse_interval(std::string_view text, const std::string& flag) {
  const auto v = parse_colon_list(std::string(text), 2, flag);
  if (!(v[0] < v[1])) throw ConfigurationError(flag + " needs lo < hi, got '" + std::string(text) + "'");
  return Interval(v[0], v[1]);
}

EdgeworthVariant parse_variant(const std::string& s) {
  return s == "kappa2" ? EdgeworthVariant::literal_kappa_squared : EdgeworthVariant::classical;
}

std::string variant_name(EdgeworthVariant v) {
  return v == EdgeworthVariant::classical ? "classical" : "kappa2";
}

class Output {
 public:
  Output(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  std::string format(const std::string& fallback) const {
    return g_.format.empty() ? fallback : g_.format;
  }

  void emit(const std::string& text) const {
    if (g_.out.empty()) {
      out_ << text;
    } else {
      detail::write_text(g_.out, text);
    }
  }

 private:
  const Globals& g_;
  std::ostream& out_;
};

std::string csv_row(std::initializer_list<std::string> header,
                    std::initializer_list<std::string> values) {
  std::string s;
  for (const auto& h : header) s += (s.empty() ? "" : ",") + h;
  s += '\n';
  std::string row;
  for (const auto& v : values) row += (row.empty() ? "" : ",") + v;
  return s + row + '\n';
}

std::string check_csv_line(const char* name, const AxiomCheck& c) {
  return std::string(name) + ',' + (c.pass ? "true" : "false") + ',' +
         format17(c.worst_violation) + ',' + std::to_string(c.failures) + '\n';
}

json check_json(const AxiomCheck& c) {
  json j;
  j["pass"] = c.pass;
  j["worst_violation"] = number(c.worst_violation);
  j["failures"] = c.failures;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular (quasi-arithmetic) means, their limit laws and stability", "regmean"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file, or output directory for reproduce-*");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  // mean
  std::string mean_generator;
  std::string mean_data;
  CLI::App* mean_cmd = sub("mean", "Regular mean of a data set");
  mean_cmd->add_option("--generator", mean_generator, "Generator spec")->required();
  mean_cmd->add_option("--data", mean_data, "CSV file or inline list")->required();

  // axioms
  std::string ax_generator;
  AxiomOptions ax;
  std::string ax_box;
  CLI::App* axioms_cmd = sub("axioms", "Randomized A1-A4 checks");
  axioms_cmd->add_option("--generator", ax_generator, "Generator spec")->required();
  axioms_cmd->add_option("--n", ax.n, "Vector length")->capture_default_str();
  axioms_cmd->add_option("--n0", ax.n0, "Block length for A4")->capture_default_str();
  axioms_cmd->add_option("--trials", ax.trials, "Trials per axiom")->capture_default_str();
  axioms_cmd->add_option("--tol", ax.tol, "Tolerance")->capture_default_str();
  axioms_cmd->add_option("--box", ax_box, "Sampling interval lo:hi");

  // edgeworth
  std::string ew_generator;
  std::string ew_dist;
  std::size_t ew_n = 1000;
  std::string ew_grid = "-4:4:81";
  std::string ew_variant = variant_name(kDefaultEdgeworthVariant);
  CLI::App* edgeworth_cmd = sub("edgeworth", "Edgeworth expansion of the standardized mean");
  edgeworth_cmd->add_option("--generator", ew_generator, "Generator spec")->required();
  edgeworth_cmd->add_option("--dist", ew_dist, "Distribution spec")->required();
  edgeworth_cmd->add_option("--n", ew_n, "Sample size")->capture_default_str();
  edgeworth_cmd->add_option("--grid", ew_grid, "lo:hi:steps")->capture_default_str();
  edgeworth_cmd->add_option("--variant", ew_variant, "Coefficient of p3")
      ->check(CLI::IsMember({"classical", "kappa2"}))
      ->capture_default_str();

  // simulate
  std::string sim_dist;
  std::string sim_generator;
  std::size_t sim_n = 1000;
  std::size_t sim_replicates = 1000;
  std::string sim_hist;
  std::string sim_statistic = "standardized";
  double sim_bin_width = 0.25;
  std::string sim_variant = variant_name(kDefaultEdgeworthVariant);
  CLI::App* simulate_cmd = sub("simulate", "Monte Carlo check of the limit law");
  simulate_cmd->add_option("--dist", sim_dist, "Distribution spec")->required();
  simulate_cmd->add_option("--generator", sim_generator, "Generator spec")->required();
  simulate_cmd->add_option("--n", sim_n, "Sample size")->capture_default_str();
  simulate_cmd->add_option("--replicates", sim_replicates, "Replicates")->capture_default_str();
  simulate_cmd->add_option("--hist", sim_hist, "Histogram CSV path");
  simulate_cmd->add_option("--statistic", sim_statistic, "Histogram statistic")
      ->check(CLI::IsMember({"standardized", "scaled"}))
      ->capture_default_str();
  simulate_cmd->add_option("--bin-width", sim_bin_width, "Histogram bin width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate_cmd->add_option("--variant", sim_variant, "Coefficient of p3")
      ->check(CLI::IsMember({"classical", "kappa2"}))
      ->capture_default_str();

  // stability
  std::string st_g;
  std::string st_h;
  std::string st_box = "1:2";
  std::size_t st_n = 2;
  StabilityOptions st;
  CLI::App* stability_cmd = sub("stability", "Generator-perturbation bound check");
  stability_cmd->set_help_flag("--help", "Print this help message and exit");
  stability_cmd->add_option("--g", st_g, "First generator")->required();
  stability_cmd->add_option("--h", st_h, "Second generator")->required();
  stability_cmd->add_option("--box", st_box, "lo:hi, or one lo:hi per coordinate separated by commas")
      ->capture_default_str();
  stability_cmd->add_option("--n", st_n, "Dimension")->capture_default_str();
  stability_cmd->add_option("--grid", st.grid_per_dim, "Grid points per axis")->capture_default_str();
  stability_cmd->add_option("--slope-grid", st.slope_grid, "Grid points over B")
      ->capture_default_str();
  stability_cmd->add_option("--points", st.random_points, "Random points when n > 3")
      ->capture_default_str();

  // portfolio
  std::string pf_returns;
  double pf_w0 = 1.0;
  bool pf_percent = false;
  bool pf_sample = false;
  CLI::App* portfolio_cmd = sub("portfolio", "Geometric average return and Markowitz approximation");
  portfolio_cmd->add_option("--returns", pf_returns, "CSV file or inline list")->required();
  portfolio_cmd->add_option("--w0", pf_w0, "Initial wealth")->capture_default_str();
  portfolio_cmd->add_flag("--percent", pf_percent, "Inputs are percentages");
  portfolio_cmd->add_flag("--sample-variance", pf_sample, "Variance divisor n - 1");

  // reproduce-figure1 / reproduce-figure2
  FigureOptions fig;
  std::string fig_variant = variant_name(kDefaultEdgeworthVariant);
  CLI::App* fig1_cmd = sub("reproduce-figure1", "Scenarios A-D x {identity, log, reciprocal}");
  CLI::App* fig2_cmd = sub("reproduce-figure2", "LogNormal(2, 6.25), identity vs log");
  for (CLI::App* c : {fig1_cmd, fig2_cmd}) {
    c->add_option("--n", fig.n, "Sample size")->capture_default_str();
    c->add_option("--replicates", fig.replicates, "Replicates")->capture_default_str();
    c->add_option("--variant", fig_variant, "Coefficient of p3")
        ->check(CLI::IsMember({"classical", "kappa2"}))
        ->capture_default_str();
  }
  fig1_cmd->add_flag("--plot-script", fig.plot_script, "Also write plot_figure1.py");

  std::vector<const char*> argv;
  argv.push_back("regmean");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Output output(g, out);
  try {
    if (*mean_cmd) {
      const Generator gen = parse_generator(mean_generator);
      const std::vector<double> x = load_values(mean_data, "--data");
      const double m = mean(gen, x);
      json config;
      config["generator"] = gen.name();
      config["data"] = mean_data;
      if (output.format("json") == "csv") {
        output.emit(csv_row({"generator", "n", "mean"},
                            {gen.name(), std::to_string(x.size()), format17(m)}));
      } else {
        json j;
        j["metadata"] = detail::metadata("mean", g.seed, config);
        j["generator"] = gen.name();
        j["n"] = x.size();
        j["mean"] = number(m);
        output.emit(j.dump(2) + "\n");
      }
    } else if (*axioms_cmd) {
      const Generator gen = parse_generator(ax_generator);
      ax.seed = g.seed;
      if (!ax_box.empty()) ax.box = parse_interval(ax_box, "--box");
      const AxiomReport r = check_axioms(gen, ax);
      if (output.format("json") == "csv") {
        output.emit("axiom,pass,worst_violation,failures\n" +
                    check_csv_line("A1", r.a1_monotone) + check_csv_line("A2", r.a2_symmetric) +
                    check_csv_line("A3", r.a3_idempotent) +
                    check_csv_line("A4", r.a4_replacement));
      } else {
        json config;
        config["generator"] = gen.name();
        config["n"] = ax.n;
        config["n0"] = ax.n0;
        config["trials"] = ax.trials;
        config["tol"] = ax.tol;
        config["box"] = r.box.to_string();
        json j;
        j["metadata"] = detail::metadata("axioms", g.seed, config);
        j["A1"] = check_json(r.a1_monotone);
        j["A2"] = check_json(r.a2_symmetric);
        j["A3"] = check_json(r.a3_idempotent);
        j["A4"] = check_json(r.a4_replacement);
        j["trials"] = r.trials;
        j["tolerance"] = number(r.tolerance);
        j["epsilon"] = number(r.epsilon);
        j["all_pass"] = r.all_pass();
        output.emit(j.dump(2) + "\n");
      }
    } else if (*edgeworth_cmd) {
      const Generator gen = parse_generator(ew_generator);
      const DistributionModel dist = parse_distribution(ew_dist);
      if (ew_n < 1) throw ConfigurationError("--n must be >= 1");
      const auto grid = parse_colon_list(ew_grid, 3, "--grid");
      const double steps_d = grid[2];
      if (!(steps_d >= 2.0) || steps_d != std::floor(steps_d)) {
        throw ConfigurationError("--grid needs an integer step count >= 2");
      }
      if (!(grid[0] < grid[1])) throw ConfigurationError("--grid needs lo < hi");
      const GMoments mom = g_moments(gen, dist);
      const EdgeworthVariant variant = parse_variant(ew_variant);
      const detail::EdgeworthTable t = detail::edgeworth_table(
          Interval(grid[0], grid[1]), static_cast<std::size_t>(steps_d), ew_n, mom, variant);
      if (output.format("csv") == "csv") {
        output.emit(detail::edgeworth_csv(t));
      } else {
        json config;
        config["generator"] = gen.name();
        config["dist"] = dist.to_string();
        config["n"] = ew_n;
        config["grid"] = ew_grid;
        config["variant"] = variant_name(variant);
        json j;
        j["metadata"] = detail::metadata("edgeworth", g.seed, config);
        j["skew_g"] = mom.skew_g ? number(*mom.skew_g) : json(nullptr);
        j["exkurt_g"] = mom.exkurt_g ? number(*mom.exkurt_g) : json(nullptr);
        json rows = json::array();
        for (std::size_t i = 0; i < t.x.size(); ++i) {
          const EdgeworthTerms& e = t.terms[i];
          json row;
          row["x"] = number(t.x[i]);
          row["phi_cdf"] = number(e.normal_cdf);
          row["edgeworth_cdf"] = number(e.value);
          row["correction_1"] = number(e.corrections[0]);
          row["correction_2"] = number(e.corrections[1]);
          row["correction_3"] = number(e.corrections[2]);
          rows.push_back(row);
        }
        j["rows"] = rows;
        output.emit(j.dump(2) + "\n");
      }
    } else if (*simulate_cmd) {
      ScenarioConfig cfg{parse_distribution(sim_dist), parse_generator(sim_generator), sim_n,
                         sim_replicates, g.seed};
      RunOptions run;
      run.threads = g.threads;
      run.variant = parse_variant(sim_variant);
      const SimulationReport r = run_scenario(cfg, run);
      if (!sim_hist.empty()) {
        const auto bins = sim_statistic == "scaled"
                              ? histogram(r.scaled, sim_bin_width, std::sqrt(r.asymptotic.asym_var))
                              : histogram(r.statistics, sim_bin_width);
        detail::write_text(sim_hist, detail::hist_csv(bins));
      }
      if (output.format("json") == "csv") {
        output.emit(csv_row(
            {"dist", "generator", "n", "replicates", "seed", "eg", "asym_var", "empirical_var",
             "ks", "edgeworth_sup_gap", "runtime_ms"},
            {cfg.dist.to_string(), cfg.generator.name(), std::to_string(cfg.n),
             std::to_string(cfg.replicates), std::to_string(cfg.seed), format17(r.asymptotic.eg),
             format17(r.asymptotic.asym_var), format17(r.empirical_var), format17(r.ks_vs_normal),
             r.edgeworth_sup_gap ? format17(*r.edgeworth_sup_gap) : "", format17(r.runtime_ms)}));
      } else {
        json j = detail::simulation_json(r, "simulate", sim_statistic);
        j["metadata"]["config"]["variant"] = variant_name(run.variant);
        output.emit(j.dump(2) + "\n");
      }
    } else if (*stability_cmd) {
      const Generator gg = parse_generator(st_g);
      const Generator hh = parse_generator(st_h);
      if (st_n < 1) throw ConfigurationError("--n must be >= 1");
      std::vector<Interval> box;
      for (std::string_view part : split_fields(st_box, ",")) box.push_back(parse_interval(part, "--box"));
      if (box.size() == 1) box.assign(st_n, box.front());
      if (box.size() != st_n) {
        throw ConfigurationError("--box lists " + std::to_string(box.size()) +
                                 " intervals for n = " + std::to_string(st_n));
      }
      st.seed = g.seed;
      const StabilityReport r = verify_stability(gg, hh, box, st);
      if (output.format("json") == "csv") {
        output.emit(csv_row({"sup_mean_distance", "generator_distance", "bound_constant", "bound",
                             "grid_slack", "satisfied"},
                            {format17(r.sup_mean_distance), format17(r.generator_distance),
                             format17(r.bound_constant), format17(r.bound),
                             format17(r.grid_slack), r.satisfied ? "true" : "false"}));
      } else {
        json config;
        config["g"] = gg.name();
        config["h"] = hh.name();
        config["box"] = st_box;
        config["n"] = st_n;
        config["grid"] = st.grid_per_dim;
        config["slope_grid"] = st.slope_grid;
        if (st_n > 3) config["points"] = st.random_points;
        json j;
        j["metadata"] = detail::metadata("stability", g.seed, config);
        j["sup_mean_distance"] = number(r.sup_mean_distance);
        j["generator_distance"] = number(r.generator_distance);
        j["bound_constant"] = number(r.bound_constant);
        j["bound"] = number(r.bound);
        j["lipschitz_inverse"] = number(r.lipschitz_inverse);
        j["min_slope"] = number(r.min_slope);
        j["grid_slack"] = number(r.grid_slack);
        j["satisfied"] = r.satisfied;
        j["exhaustive"] = r.exhaustive;
        j["points"] = r.points;
        j["note"] = r.note;
        output.emit(j.dump(2) + "\n");
      }
    } else if (*portfolio_cmd) {
      ReturnSeries series{load_values(pf_returns, "--returns"), pf_w0};
      if (pf_percent) {
        for (double& r : series.returns) r /= 100.0;
      }
      const VarianceDivisor divisor =
          pf_sample ? VarianceDivisor::sample : VarianceDivisor::population;
      const double wealth = wealth_path(series);
      const double geo = geometric_average_return(series);
      const double mk = markowitz_approximation(series, divisor);
      if (output.format("json") == "csv") {
        output.emit(csv_row({"n", "w0", "wealth", "geometric_gross", "geometric_net", "markowitz",
                             "gap"},
                            {std::to_string(series.returns.size()), format17(series.w0),
                             format17(wealth), format17(geo), format17(geo - 1.0), format17(mk),
                             format17(mk - geo)}));
      } else {
        json config;
        config["returns"] = pf_returns;
        config["w0"] = pf_w0;
        config["percent"] = pf_percent;
        config["variance_divisor"] = pf_sample ? "n-1" : "n";
        json j;
        j["metadata"] = detail::metadata("portfolio", g.seed, config);
        j["n"] = series.returns.size();
        j["wealth"] = number(wealth);
        j["geometric_gross"] = number(geo);
        j["geometric_net"] = number(geo - 1.0);
        j["markowitz"] = number(mk);
        j["gap"] = number(mk - geo);
        output.emit(j.dump(2) + "\n");
      }
    } else if (*fig1_cmd || *fig2_cmd) {
      const bool first = static_cast<bool>(*fig1_cmd);
      fig.out_dir = g.out.empty() ? (first ? "figure1" : "figure2") : g.out;
      fig.seed = g.seed;
      fig.threads = g.threads;
      fig.variant = parse_variant(fig_variant);
      if (first) {
        const std::vector<FigureCell> cells = reproduce_figure1(fig);
        if (output.format("json") == "csv") {
          out << detail::read_text(fig.out_dir / "summary.csv");
        } else {
          json config;
          config["out_dir"] = fig.out_dir.string();
          config["n"] = fig.n;
          config["replicates"] = fig.replicates;
          json j;
          j["metadata"] = detail::metadata("reproduce-figure1", fig.seed, config);
          json rows = json::array();
          bool all_ks = true;
          bool all_var = true;
          for (const FigureCell& c : cells) {
            const double ratio = c.empirical_var / c.asym_var;
            all_ks = all_ks && c.ks < 0.05;
            all_var = all_var && ratio >= 0.85 && ratio <= 1.15;
            json row;
            row["scenario"] = c.scenario;
            row["dist"] = c.dist;
            row["generator"] = c.generator;
            row["ks"] = number(c.ks);
            row["var_ratio"] = number(ratio);
            rows.push_back(row);
          }
          j["cells"] = rows;
          j["all_ks_below_0.05"] = all_ks;
          j["all_var_ratio_within_15pct"] = all_var;
          out << j.dump(2) << "\n";
        }
      } else {
        reproduce_figure2(fig);
        out << detail::read_text(fig.out_dir / "summary.json");
      }
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace regmean
