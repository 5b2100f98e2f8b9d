// Command-line surface: region counting, arrangement checks, hyperplane
// optimization, and the CSV experiment harness. Every command is
// deterministic given its config and seed; re-runs produce identical bytes.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperbin/ccc.hpp"
#include "hyperbin/classmodel.hpp"
#include "hyperbin/coding.hpp"
#include "hyperbin/config.hpp"
#include "hyperbin/experiments.hpp"
#include "hyperbin/geometry.hpp"
#include "hyperbin/infometric.hpp"
#include "hyperbin/optimizer.hpp"

namespace {

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

hyperbin::Config load_config(const std::string& path) {
  if (path.empty()) return hyperbin::Config();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return hyperbin::Config::parse(in);
}

hyperbin::SearchConfig search_from_config(const hyperbin::Config& cfg, std::uint64_t seed) {
  hyperbin::SearchConfig sc;
  sc.restarts = static_cast<int>(cfg.get_int("restarts", sc.restarts));
  sc.max_iterations = static_cast<int>(cfg.get_int("max_iterations", sc.max_iterations));
  sc.step_shrink = cfg.get_double("step_shrink", sc.step_shrink);
  sc.initial_step = cfg.get_double("initial_step", sc.initial_step);
  sc.convergence_tol = cfg.get_double("convergence_tol", sc.convergence_tol);
  sc.mc_samples = static_cast<std::size_t>(cfg.get_int("mc_samples", static_cast<long>(sc.mc_samples)));
  sc.seed = seed;
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyper binning toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::int64_t seed = 0;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_path, "output path (default: stdout)");

  long arg_s = 2, arg_j = 1;
  auto* regions = app.add_subcommand("regions", "region count r(s,J)");
  regions->add_option("s", arg_s, "space dimension / sources")->required();
  regions->add_option("J", arg_j, "number of hyperplanes")->required();

  auto* nmax = app.add_subcommand("nmax", "largest supported feature dimension");
  nmax->add_option("J", arg_j, "number of hyperplanes")->required();
  nmax->add_option("s", arg_s, "space dimension / sources")->required();

  std::string arrangement_path;
  double gp_tol = 1e-9;
  auto* gp = app.add_subcommand("gp-check", "general-position check of an arrangement file");
  gp->add_option("file", arrangement_path, "arrangement text file")->required();
  gp->add_option("--tol", gp_tol, "minor tolerance");

  auto* optimize = app.add_subcommand("optimize", "place hyperplanes for a class model");
  auto* fig2 = app.add_subcommand("fig2", "dimension budget table");
  auto* fig4 = app.add_subcommand("fig4", "information vs class count table");
  auto* example2 = app.add_subcommand("example2", "three-scheme information table");
  auto* cover = app.add_subcommand("cover-sim", "random binning simulation sweep");
  auto* pipeline = app.add_subcommand("pipeline", "end-to-end encode/decode experiment");
  auto* ccc = app.add_subcommand("ccc", "coloring connectivity demos");
  auto* audit = app.add_subcommand("audit-props", "randomized proposition audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    const hyperbin::Config cfg = load_config(config_path);
    const auto u_seed = static_cast<std::uint64_t>(cfg.get_int("seed", seed));

    if (*regions) {
      write_output(std::to_string(hyperbin::region_count(static_cast<int>(arg_s),
                                                         static_cast<int>(arg_j))) + "\n",
                   out_path);
    } else if (*nmax) {
      write_output(std::to_string(hyperbin::max_feature_dim(static_cast<int>(arg_j),
                                                            static_cast<int>(arg_s))) + "\n",
                   out_path);
    } else if (*gp) {
      std::ifstream in(arrangement_path);
      if (!in) throw std::invalid_argument("cannot open arrangement file: " + arrangement_path);
      const hyperbin::Arrangement arr = hyperbin::arrangement_from_text(in);
      const bool ok = hyperbin::is_general_position(arr, gp_tol);
      write_output(std::string("general_position,") + (ok ? "yes" : "no") + "\n", out_path);
    } else if (*optimize) {
      const hyperbin::ClassModel model = hyperbin::model_from_config(cfg);
      const hyperbin::SearchConfig sc = search_from_config(cfg, u_seed);
      const int J = static_cast<int>(cfg.get_int("J", 1));
      const hyperbin::OptimizationResult result = hyperbin::optimize_arrangement(model, J, sc);
      std::string text = hyperbin::arrangement_to_text(result.arrangement);
      write_output(text, out_path);
      const std::string trace_path = cfg.get_string("trace_out", "");
      if (!trace_path.empty()) {
        std::string trace_csv = "iteration,objective\n";
        for (std::size_t i = 0; i < result.trace.size(); ++i)
          trace_csv += std::to_string(i) + "," + hyperbin::detail::g17(result.trace[i]) + "\n";
        write_output(trace_csv, trace_path);
      }
      std::cerr << "objective " << result.objective << (result.gp_ok ? "" : " (GP degraded)")
                << (result.dimension_budget_ok ? "" : " (dimension budget exceeded, informational)")
                << "\n";
    } else if (*fig2) {
      const std::vector<long> s_list = cfg.get_int_list("s_list", {2, 3, 4, 5});
      const long j_max = cfg.get_int("j_max", 20);
      write_output(hyperbin::run_fig2(s_list, j_max), out_path);
    } else if (*fig4) {
      const std::vector<double> sigma2 = cfg.get_double_list("sigma2", {0.25, 1.0, 4.0});
      const long m_max = cfg.get_int("m_max", 20);
      const double mean_max = cfg.get_double("mean_max", 0.75);
      const hyperbin::Fig4Result result = hyperbin::run_fig4(sigma2, m_max, mean_max);
      write_output(result.csv, out_path);
      if (result.asym_below_sym_cells > 0)
        std::cerr << "note: asymmetric < symmetric at " << result.asym_below_sym_cells
                  << " grid cells (worst gap " << result.worst_gap << ")\n";
    } else if (*example2) {
      write_output(hyperbin::run_example2().csv, out_path);
    } else if (*cover) {
      const std::vector<double> pmf = cfg.get_double_list("pmf", {0.89, 0.11});
      const int n = static_cast<int>(cfg.get_int("n", 20));
      const std::vector<double> rates = cfg.get_double_list("rates", {0.3, 0.8});
      const std::vector<long> seeds = cfg.get_int_list("seeds", {1, 2, 3, 4, 5});
      const long trials = cfg.get_int("trials", 2000);
      write_output(hyperbin::run_cover_sweep(pmf, n, rates, seeds, trials), out_path);
    } else if (*pipeline) {
      const hyperbin::ClassModel model = hyperbin::model_from_config(cfg);
      hyperbin::PipelineOptions opt;
      const std::vector<long> j_list = cfg.get_int_list("j_values", {0, 1, 2, 3});
      opt.j_values.assign(j_list.begin(), j_list.end());
      opt.eval_samples = static_cast<std::size_t>(cfg.get_int("eval_samples", 10000));
      opt.helper_samples = static_cast<std::size_t>(cfg.get_int("helper_samples", 200000));
      opt.function = cfg.get_string("function", "sum");
      opt.search = search_from_config(cfg, u_seed);
      const hyperbin::PipelineResult result = hyperbin::run_pipeline(model, opt);
      write_output(result.csv, out_path);
      for (const auto& row : result.rows)
        if (!row.all_regions_seen)
          std::cerr << "note: " << row.report.scheme << ": some regions unseen by the helper\n";
    } else if (*ccc) {
      write_output(hyperbin::run_ccc_demos().csv, out_path);
    } else if (*audit) {
      hyperbin::AuditConfig acfg;
      acfg.p_lo = cfg.get_double("p_lo", acfg.p_lo);
      acfg.p_hi = cfg.get_double("p_hi", acfg.p_hi);
      acfg.max_classes = static_cast<int>(cfg.get_int("max_classes", acfg.max_classes));
      const int trials = static_cast<int>(cfg.get_int("trials", 1000));
      const hyperbin::AuditReport report = hyperbin::proposition_audit(acfg, trials, u_seed);
      std::ostringstream csv;
      hyperbin::write_audit_csv(report, csv);
      write_output(csv.str(), out_path);
      std::cerr << "prop2 violations " << report.monotone_proportional.violations << "/"
                << report.monotone_proportional.checks << ", lower-bound violations "
                << report.lower_bound.violations << "/" << report.lower_bound.checks
                << ", upper-bound violations " << report.upper_bound.violations << "/"
                << report.upper_bound.checks << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
