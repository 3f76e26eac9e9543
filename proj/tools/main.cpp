// probekit command-line front end.
//
//   probekit gen     --out DIR [generator flags]     write a synthetic dataset
//   probekit run     --config FILE [overrides]       run an experiment
//   probekit sweep   --config FILE [grid axes]       run a parameter sweep
//   probekit budget  [--users N] [rate flags]        probe-budget feasibility
//   probekit report  --out DIR report.csv...         aggregate report files
//
// Exit codes: 0 success, 1 validation/runtime failure (message names the
// offending file), 2 usage error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "probekit/budget.hpp"
#include "probekit/harness.hpp"
#include "probekit/io.hpp"

namespace {

using probekit::PeriodReport;

void print_run_summary(const probekit::RunResult& result) {
  for (const probekit::CellResult& cell : result.cells) {
    const bool has_global =
        std::any_of(cell.rows.begin(), cell.rows.end(),
                    [](const PeriodReport& r) { return r.topic.empty(); });
    std::cout << cell.key.strategy.name << " theta=" << cell.key.strategy.theta
              << " beta=" << cell.key.strategy.beta << " capacity=" << cell.key.capacity
              << " seed=" << cell.key.seed;
    if (has_global) {
      std::cout << "  mse=" << probekit::mean_metric(cell, &PeriodReport::mse_value)
                << "  jaccard100=" << probekit::mean_metric(cell, &PeriodReport::jaccard100)
                << "  kendall=" << probekit::mean_metric(cell, &PeriodReport::kendall);
    }
    if (cell.audit.injected_total > 0) {
      std::cout << "  inferred_precision=" << cell.audit.precision()
                << " baseline=" << cell.audit.baseline_precision();
    }
    std::cout << '\n';
  }
}

struct GroupStats {
  std::size_t rows = 0;
  std::vector<std::uint64_t> seeds;
  double mse = 0.0, j10 = 0.0, j100 = 0.0, j1000 = 0.0, kendall = 0.0, fp = 0.0, fn = 0.0;
  double mse_sq = 0.0;

  void add(const PeriodReport& r) {
    ++rows;
    if (std::find(seeds.begin(), seeds.end(), r.seed) == seeds.end()) seeds.push_back(r.seed);
    mse += r.mse_value;
    mse_sq += r.mse_value * r.mse_value;
    j10 += r.jaccard10;
    j100 += r.jaccard100;
    j1000 += r.jaccard1000;
    kendall += r.kendall;
    fp += r.edge_fp;
    fn += r.edge_fn;
  }
};

void write_group_csv(const std::filesystem::path& path, bool with_period,
                     const std::map<std::string, GroupStats>& groups) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "strategy,topic,theta,beta,capacity" << (with_period ? ",period" : "")
      << ",seeds,rows,mse_mean,mse_std,jaccard10_mean,jaccard100_mean,jaccard1000_mean,"
         "kendall_mean,edge_fp_mean,edge_fn_mean\n";
  for (const auto& [key, g] : groups) {
    const double n = static_cast<double>(g.rows);
    const double mse_mean = g.mse / n;
    const double var = std::max(0.0, g.mse_sq / n - mse_mean * mse_mean);
    out << key << ',' << g.seeds.size() << ',' << g.rows << ','
        << probekit::format_double(mse_mean) << ',' << probekit::format_double(std::sqrt(var))
        << ',' << probekit::format_double(g.j10 / n) << ','
        << probekit::format_double(g.j100 / n) << ',' << probekit::format_double(g.j1000 / n)
        << ',' << probekit::format_double(g.kendall / n) << ','
        << probekit::format_double(g.fp / n) << ',' << probekit::format_double(g.fn / n) << '\n';
  }
}

int cmd_report(const std::vector<std::string>& inputs, const std::filesystem::path& out_dir) {
  std::map<std::string, GroupStats> by_cell;
  std::map<std::string, GroupStats> by_period;
  for (const std::string& input : inputs) {
    const probekit::ReportFile report = probekit::read_report_csv(input);
    for (const PeriodReport& r : report.rows) {
      const std::string base = r.strategy + ',' + r.topic + ',' +
                               probekit::format_double(r.theta) + ',' +
                               probekit::format_double(r.beta) + ',' +
                               probekit::format_double(r.capacity);
      by_cell[base].add(r);
      by_period[base + ',' + std::to_string(r.period)].add(r);
    }
  }
  std::filesystem::create_directories(out_dir);
  write_group_csv(out_dir / "by_strategy_capacity.csv", false, by_cell);
  write_group_csv(out_dir / "by_period.csv", true, by_period);
  std::cout << "aggregated " << inputs.size() << " report file(s) into " << out_dir.string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-limited network probing workbench"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset directory");
  probekit::GenConfig gen_cfg;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output dataset directory")->required();
  gen->add_option("--n", gen_cfg.n, "Vertex count");
  gen->add_option("--m0", gen_cfg.m0, "Initial edge count");
  gen->add_option("--periods", gen_cfg.periods, "Last period index");
  gen->add_option("--churn-add", gen_cfg.churn_add_frac, "Edge addition fraction per period");
  gen->add_option("--churn-del", gen_cfg.churn_del_frac, "Edge deletion fraction per period");
  gen->add_option("--closure-frac", gen_cfg.closure_frac,
                  "Share of added edges that close a friend-of-friend wedge");
  gen->add_option("--lurker-frac", gen_cfg.lurker_frac,
                  "Fraction of early arrivals capped at near-zero out-degree");
  gen->add_option("--indeg-cap-frac", gen_cfg.indeg_cap_frac,
                  "Follower saturation point as a share of n (0 disables)");
  gen->add_option("--hot-frac", gen_cfg.hot_frac, "Fraction of churn-boosted users");
  gen->add_option("--hot-boost", gen_cfg.hot_boost, "Churn boost factor");
  gen->add_option("--topics", gen_cfg.topic_count, "Topic dictionary count");
  gen->add_option("--keywords-per-topic", gen_cfg.keywords_per_topic, "Keywords per dictionary");
  gen->add_option("--silent-frac", gen_cfg.silent_frac, "Fraction of users who never tweet");
  gen->add_option("--tweets-mean", gen_cfg.tweets_mean, "Mean tweets per active user");
  gen->add_option("--tweets-cap", gen_cfg.tweets_cap, "Max tweets per user per period");
  gen->add_option("--dominant-share", gen_cfg.dominant_topic_share,
                  "Probability of the user's main topic");
  gen->add_option("--seed", gen_cfg.seed, "Generator seed");

  // --- run ---
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string run_config, run_out;
  std::uint64_t run_seed = 0;
  unsigned run_threads = 0;
  bool run_write_ranks = false;
  run->add_option("--config", run_config, "Experiment config (JSON)")->required();
  run->add_option("--out", run_out, "Override the config's output_dir");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Replace the config's seed list");
  run->add_option("--threads", run_threads, "Parallel cells (0 = hardware)");
  run->add_flag("--write-ranks", run_write_ranks, "Write per-period rank CSVs");

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a parameter grid over a base config");
  std::string sweep_config, sweep_out;
  probekit::SweepGrid grid;
  sweep_cmd->add_option("--config", sweep_config, "Experiment config (JSON)")->required();
  sweep_cmd->add_option("--out", sweep_out, "Override the config's output_dir");
  sweep_cmd->add_option("--theta", grid.thetas, "Theta grid values");
  sweep_cmd->add_option("--beta", grid.betas, "Beta grid values");
  sweep_cmd->add_option("--capacity", grid.capacities, "Capacity grid values");
  sweep_cmd->add_option("--seed", grid.seeds, "Seed grid values");

  // --- budget ---
  auto* budget = app.add_subcommand("budget", "Probe-budget feasibility for the rate model");
  probekit::RateModel rates;
  double budget_days = 15.0;
  long long budget_users = -1;
  std::string budget_kind = "relations";
  budget->add_option("--days", budget_days, "Period length in days");
  budget->add_option("--kind", budget_kind, "relations | tweets")
      ->check(CLI::IsMember({"relations", "tweets"}));
  budget->add_option("--users", budget_users, "Requested users per period");
  budget->add_option("--rel-calls", rates.rel_calls_per_window, "Relation calls per window");
  budget->add_option("--tweet-calls", rates.tweet_calls_per_window, "Timeline calls per window");
  budget->add_option("--window-minutes", rates.window_minutes, "Rate window length");

  // --- report ---
  auto* report = app.add_subcommand("report", "Aggregate report.csv files");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("--out", report_out, "Aggregate output directory")->required();
  report->add_option("inputs", report_inputs, "report.csv files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      probekit::write_dataset(gen_cfg, gen_out);
      std::cout << "wrote dataset (n=" << gen_cfg.n << ", periods 0.." << gen_cfg.periods
                << ") to " << gen_out << '\n';
      return 0;
    }
    if (run->parsed()) {
      probekit::ExperimentConfig cfg = probekit::load_config(run_config);
      if (!run_out.empty()) cfg.output_dir = run_out;
      if (run_seed_opt->count() > 0) cfg.seeds = {run_seed};
      if (run_threads != 0) cfg.threads = run_threads;
      if (run_write_ranks) cfg.write_ranks = true;
      const probekit::RunResult result = probekit::run_experiment(cfg);
      print_run_summary(result);
      if (!cfg.output_dir.empty()) {
        std::cout << "report: " << (cfg.output_dir / "report.csv").string() << '\n';
      }
      return 0;
    }
    if (sweep_cmd->parsed()) {
      probekit::ExperimentConfig cfg = probekit::load_config(sweep_config);
      if (!sweep_out.empty()) cfg.output_dir = sweep_out;
      const probekit::RunResult result = probekit::sweep(cfg, grid);
      print_run_summary(result);
      if (!cfg.output_dir.empty()) {
        std::cout << "report: " << (cfg.output_dir / "report.csv").string() << '\n';
      }
      return 0;
    }
    if (budget->parsed()) {
      const probekit::ProbeKind kind = budget_kind == "tweets" ? probekit::ProbeKind::tweets
                                                               : probekit::ProbeKind::relations;
      if (budget_users < 0) {
        std::cout << budget_kind << ": capacity "
                  << probekit::feasible_users(rates, budget_days, kind) << " users/period over "
                  << budget_days << " days\n";
        return 0;
      }
      const probekit::BudgetCheck check =
          probekit::check_probe_budget(rates, budget_days, kind, budget_users);
      std::cout << budget_kind << ": requested " << check.requested << " users/period, capacity "
                << check.capacity << " over " << budget_days << " days: "
                << (check.feasible ? "FEASIBLE" : "INFEASIBLE");
      if (!check.feasible) std::cout << " (short by " << check.shortfall << ")";
      std::cout << '\n';
      return check.feasible ? 0 : 1;
    }
    if (report->parsed()) return cmd_report(report_inputs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
