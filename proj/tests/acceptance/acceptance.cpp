// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [work_dir]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "regmean/asymptotics.hpp"
#include "regmean/cli.hpp"
#include "regmean/errors.hpp"
#include "regmean/portfolio.hpp"
#include "regmean/regular_mean.hpp"
#include "regmean/stability.hpp"

using namespace regmean;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Runs a criterion body; an escaping exception counts as a failure.
void criterion(int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::vector<Generator> table_generators() {
  return {make_builtin(BuiltinKind::identity), make_builtin(BuiltinKind::log),
          make_builtin(BuiltinKind::reciprocal), make_builtin(BuiltinKind::power, 2.0),
          make_builtin(BuiltinKind::exp)};
}

std::vector<DistributionModel> scenarios() {
  return {DistributionModel::lognormal(2.0, 1.0), DistributionModel::gamma(100.0, 1.0),
          DistributionModel::uniform(1.0, 2.0), DistributionModel::pareto(10.0)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string strip_runtime(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"runtime_ms\"") == std::string::npos) out += line + "\n";
  }
  return out;
}

// Relative path -> contents of every file under dir, runtime fields removed.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string body = slurp(e.path());
    if (e.path().extension() == ".json") body = strip_runtime(body);
    files.emplace_back(fs::relative(e.path(), dir).generic_string(), std::move(body));
  }
  std::sort(files.begin(), files.end());
  return files;
}

void figure1(const fs::path& work) {
  FigureOptions opts;
  opts.out_dir = work / "figure1";
  const auto cells = reproduce_figure1(opts);
  double worst_ks = 0.0, worst_dev = 0.0;
  bool ok = cells.size() == 12;
  for (const FigureCell& c : cells) {
    const double dev = std::abs(c.empirical_var / c.asym_var - 1.0);
    worst_ks = std::max(worst_ks, c.ks);
    worst_dev = std::max(worst_dev, dev);
    ok = ok && c.ks < 0.05 && dev <= 0.15;
  }
  report(1, "figure1", ok,
         std::to_string(cells.size()) + " cells, max ks " + fmt("%.4f", worst_ks) +
             " (< 0.05), max |var ratio - 1| " + fmt("%.4f", worst_dev) + " (<= 0.15)");
}

void figure2(const fs::path& work) {
  FigureOptions opts;
  opts.out_dir = work / "figure2";
  const Figure2Result r = reproduce_figure2(opts);
  const bool ok = r.log.ks < r.identity.ks && r.log.ks < 0.05;
  report(2, "figure2", ok,
         "ks(log) " + fmt("%.4f", r.log.ks) + " < ks(identity) " + fmt("%.4f", r.identity.ks) +
             ", ks(log) < 0.05; soft target ratio >= 2: " + fmt("%.2f", r.ks_ratio) +
             (r.ks_ratio >= 2.0 ? " (met)" : " (not met, reported only)"));
}

void axioms() {
  std::size_t runs = 0, bad = 0;
  std::string first_bad;
  for (const Generator& g : table_generators()) {
    for (std::size_t n : {2u, 5u, 10u}) {
      for (std::size_t n0 = 1; n0 <= n; ++n0) {
        AxiomOptions o;
        o.n = n;
        o.n0 = n0;
        o.trials = 1000;
        o.tol = 1e-9;
        ++runs;
        if (!check_axioms(g, o).all_pass()) {
          ++bad;
          if (first_bad.empty()) {
            first_bad = g.name() + " n=" + std::to_string(n) + " n0=" + std::to_string(n0);
          }
        }
      }
    }
  }
  report(3, "axioms", bad == 0,
         std::to_string(runs - bad) + "/" + std::to_string(runs) +
             " (generator, n, n0) runs pass A1-A4, 1000 trials, tol 1e-9" +
             (first_bad.empty() ? "" : "; first failure " + first_bad));
}

// Sup over the jumps of the empirical CDF of the sorted sample.
double sup_gap(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

void edgeworth_oracle() {
  // Brute force: standardized sums of Gamma(1, 1) draws from the standard library.
  const GMoments mom = g_moments(make_builtin(BuiltinKind::identity), DistributionModel::gamma(1.0, 1.0));
  bool ok = true;
  std::string detail;
  for (std::size_t n : {5u, 20u}) {
    std::mt19937_64 rng(20240 + n);
    std::gamma_distribution<double> law(1.0, 1.0);
    std::vector<double> z(100000);
    for (double& v : z) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += law(rng);
      v = (s - n) / std::sqrt(static_cast<double>(n));
    }
    std::sort(z.begin(), z.end());
    const double phi_gap = sup_gap(z, normal_cdf);
    const double edge_gap = sup_gap(z, [&](double x) { return edgeworth_cdf(x, n, mom); });
    ok = ok && edge_gap < phi_gap;
    detail += "n=" + std::to_string(n) + ": edgeworth " + fmt("%.4f", edge_gap) + " vs phi " +
              fmt("%.4f", phi_gap) + "; ";
  }
  detail += "1e5 replicates, skew " + fmt("%.3f", *mom.skew_g) + ", exkurt " + fmt("%.3f", *mom.exkurt_g);
  report(4, "edgeworth_oracle", ok, detail);
}

void edgeworth_degenerate() {
  bool ok = true;
  double worst = 0.0;
  for (double s2 : {1.0, 6.25}) {
    const GMoments m = g_moments(make_builtin(BuiltinKind::log), DistributionModel::lognormal(2.0, s2));
    for (std::size_t n : {5u, 100u, 1000u}) {
      for (int i = -400; i <= 400; ++i) {
        const double x = i / 100.0;
        const EdgeworthTerms t = edgeworth_terms(x, n, m);
        for (double c : t.corrections) ok = ok && c == 0.0;
        worst = std::max(worst, std::abs(edgeworth_cdf(x, n, m) - normal_cdf(x)));
      }
    }
  }
  ok = ok && worst == 0.0;
  report(5, "edgeworth_degenerate", ok,
         "lognormal(2, {1, 6.25}) + log: corrections all 0, max |edgeworth - phi| " + fmt("%.1e", worst));
}

void stability() {
  const auto gens = table_generators();
  const Interval b(1.0, 2.0);
  std::size_t checks = 0, bad = 0;
  double tightest = 0.0;
  std::string first_bad;
  for (const Generator& g0 : gens) {
    for (const Generator& h0 : gens) {
      if (&g0 == &h0) continue;
      const Generator g = increasing_form(g0);
      const Generator h = increasing_form(h0);
      for (std::size_t n : {2u, 3u}) {
        StabilityOptions o;
        o.grid_per_dim = 201;
        const StabilityReport r = verify_stability(g, h, b, n, o);
        ++checks;
        const bool within = r.sup_mean_distance <= r.bound * (1.0 + 1e-6);
        if (r.bound > 0) tightest = std::max(tightest, r.sup_mean_distance / r.bound);
        double prev = -1.0;
        bool nondecreasing = true;
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const double d = verify_stability(g, blend(g, h, t), b, n, o).sup_mean_distance;
          nondecreasing = nondecreasing && d >= prev;
          prev = d;
        }
        if (!within || !nondecreasing) {
          ++bad;
          if (first_bad.empty()) {
            first_bad = g0.name() + "/" + h0.name() + " n=" + std::to_string(n) +
                        (within ? " (blend order)" : " (bound)");
          }
        }
      }
    }
  }
  report(6, "stability", bad == 0,
         std::to_string(checks - bad) + "/" + std::to_string(checks) +
             " (pair, n) checks on [1,2], grid 201; max sup/bound " + fmt("%.3f", tightest) +
             (first_bad.empty() ? "" : "; first failure " + first_bad));
}

void portfolio() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> wide(-0.9, 1.5);
  std::uniform_real_distribution<double> narrow(-0.05, 0.05);
  std::uniform_int_distribution<int> len(1, 250);
  double worst_rel = 0.0, worst_gap_ratio = 0.0;
  for (int t = 0; t < 1000; ++t) {
    ReturnSeries s;
    s.w0 = 1.0 + 999.0 * std::generate_canonical<double, 53>(rng);
    s.returns.resize(len(rng));
    for (double& r : s.returns) r = wide(rng);
    const double w = wealth_path(s);
    const double via = s.w0 * std::pow(geometric_average_return(s), static_cast<double>(s.returns.size()));
    worst_rel = std::max(worst_rel, std::abs(w - via) / std::abs(w));

    ReturnSeries q;
    q.returns.resize(len(rng));
    double mx = 0.0;
    for (double& r : q.returns) {
      r = narrow(rng);
      mx = std::max(mx, std::abs(r));
    }
    const double gap = std::abs(markowitz_approximation(q) - geometric_average_return(q));
    worst_gap_ratio = std::max(worst_gap_ratio, gap / (10.0 * mx * mx * mx));
  }
  report(7, "portfolio", worst_rel <= 1e-12 && worst_gap_ratio <= 1.0,
         "max rel |W - w0 G^n| " + fmt("%.2e", worst_rel) + " (<= 1e-12), max gap/(10 max|r|^3) " +
             fmt("%.3f", worst_gap_ratio) + " (<= 1)");
}

void determinism(const fs::path& work) {
  std::vector<std::vector<std::pair<std::string, std::string>>> snaps;
  std::vector<std::string> labels;
  for (std::size_t threads : {1u, 1u, 4u, 8u}) {
    FigureOptions opts;
    opts.threads = threads;
    opts.out_dir = work / ("determinism_" + std::to_string(snaps.size()) + "_t" + std::to_string(threads));
    fs::remove_all(opts.out_dir);
    reproduce_figure1(opts);
    snaps.push_back(snapshot(opts.out_dir));
    labels.push_back("threads=" + std::to_string(threads));
  }
  bool ok = !snaps[0].empty();
  std::string mismatch;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    if (snaps[i] != snaps[0]) {
      ok = false;
      if (mismatch.empty()) mismatch = "; run " + std::to_string(i) + " (" + labels[i] + ") differs";
    }
  }
  report(8, "determinism", ok,
         std::to_string(snaps[0].size()) + " files byte-identical over 2 runs at 1 thread and runs at 4, 8 threads" +
             " (runtime_ms excluded)" + mismatch);
}

void closed_vs_quadrature() {
  std::size_t combos = 0, skipped = 0, bad = 0;
  double worst = 0.0;
  std::string first_bad;
  for (const Generator& g : table_generators()) {
    for (const DistributionModel& d : scenarios()) {
      double eg_c, eg_q;
      AsymptoticSpec av_c, av_q;
      try {
        eg_c = kolmogorov_expectation(g, d, MomentMethod::closed_form);
        av_c = asymptotic_variance(g, d, MomentMethod::closed_form);
      } catch (const DivergenceError&) {
        ++skipped;  // infinite moments
        continue;
      }
      eg_q = kolmogorov_expectation(g, d, MomentMethod::quadrature);
      av_q = asymptotic_variance(g, d, MomentMethod::quadrature);
      ++combos;
      const double e1 = std::abs(eg_c - eg_q) / std::max(1.0, std::abs(eg_c));
      const double e2 = std::abs(av_c.asym_var - av_q.asym_var) / std::max(1.0, std::abs(av_c.asym_var));
      worst = std::max({worst, e1, e2});
      if (e1 > 1e-8 || e2 > 1e-8) {
        ++bad;
        if (first_bad.empty()) first_bad = g.name() + " x " + d.to_string();
      }
    }
  }
  report(9, "closed_vs_quadrature", bad == 0 && combos > 0,
         std::to_string(combos - bad) + "/" + std::to_string(combos) + " finite combinations (" +
             std::to_string(skipped) + " divergent skipped), max scaled diff " + fmt("%.2e", worst) +
             " (<= 1e-8)" + (first_bad.empty() ? "" : "; first failure " + first_bad));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "regmean_acceptance";
  fs::create_directories(work);

  criterion(1, "figure1", [&] { figure1(work); });
  criterion(2, "figure2", [&] { figure2(work); });
  criterion(3, "axioms", axioms);
  criterion(4, "edgeworth_oracle", edgeworth_oracle);
  criterion(5, "edgeworth_degenerate", edgeworth_degenerate);
  criterion(6, "stability", stability);
  criterion(7, "portfolio", portfolio);
  criterion(8, "determinism", [&] { determinism(work); });
  criterion(9, "closed_vs_quadrature", closed_vs_quadrature);

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
