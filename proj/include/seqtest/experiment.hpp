#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "seqtest/engine.hpp"
#include "seqtest/scenario.hpp"

namespace seqtest {

// Partition rule in config terms: intervals along one feature coordinate.
// Materialized against a concrete pool right before a run.
struct IntervalPartitionSpec {
  int coordinate = 0;
  std::vector<double> boundaries;  // ascending; k boundaries make k+1 cells
  std::vector<double> priors;      // explicit P(Z=0 | cell); empty = derive or estimate
  bool known_priors = true;        // false: plug-in estimates from initialization labels
};

Partition build_interval_partition(const Pool& pool, const IntervalPartitionSpec& spec,
                                   const std::vector<double>& priors);

// Exact P(Z=0 | cell) for an interval partition of the Gaussian scenario,
// computed from normal CDFs of the class-conditional coordinate distributions.
std::vector<double> gaussian_interval_priors(const GaussianScenario& scenario,
                                             const IntervalPartitionSpec& spec);

struct ExperimentConfig {
  enum class ScenarioKind { Gaussian, Mixture };
  ScenarioKind scenario = ScenarioKind::Gaussian;
  std::vector<double> deltas;          // gaussian grid
  std::vector<double> mixture_ratios;  // mixture grid
  std::vector<double> priors{0.5};
  std::vector<int> budgets{1000};
  std::vector<ClassifierConfig::Kind> classifiers{ClassifierConfig::Kind::Logistic};
  std::vector<StrategyConfig::Kind> strategies{StrategyConfig::Kind::Bimodal,
                                               StrategyConfig::Kind::Random};
  int replications = 200;
  int init_labels = 10;
  double alpha = 0.05;
  int pool_size = 2000;
  int dim = 2;

  // classifier hyperparameters shared across the grid
  int epochs = 20;
  double step_size = 0.1;
  double l2 = 0.0;
  int neighbor_count = 0;
  double clip_epsilon = 1e-3;
  bool standardize = false;

  // mixture component means
  std::vector<double> mean_a{0.0, 0.0};
  std::vector<double> mean_b{3.0, 0.0};
  std::vector<double> mean_c{0.0, 3.0};

  // partition strategy rule (used only when `partition` appears in strategies)
  IntervalPartitionSpec partition;

  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  bool write_trajectories = true;

  const std::vector<double>& scenario_params() const;
  void validate() const;
};

// Flat key = value format with '#' comments and comma-separated lists.
// Parse errors carry the file name and line number.
ExperimentConfig parse_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config_text(const std::string& text, const std::string& name);

struct CellKey {
  ExperimentConfig::ScenarioKind scenario = ExperimentConfig::ScenarioKind::Gaussian;
  double param = 0.0;  // delta or mixture ratio
  double prior0 = 0.5;
  ClassifierConfig::Kind classifier = ClassifierConfig::Kind::Logistic;
  StrategyConfig::Kind strategy = StrategyConfig::Kind::Bimodal;
  int budget = 0;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

// One grid-cell replication; a raw JSON line holds exactly this.
struct RawRun {
  CellKey key;
  int replication = 0;
  RunRecord record;
};

struct CellSummary {
  CellKey key;
  int replications = 0;
  int rejections = 0;
  bool null_scenario = false;  // the cell's param encodes H0
  double error_value = 0.0;    // Type I fraction under H0, Type II fraction under H1
  double mean_labels_reject = 0.0;  // over rejecting runs; NaN when none
  double sd_labels_reject = 0.0;
  double t_stat = 0.0;  // bimodal-vs-random query counts; NaN when unpaired/degenerate
  double p_value = 0.0;

  friend bool operator==(const CellSummary&, const CellSummary&) = default;
};

bool is_null_scenario(ExperimentConfig::ScenarioKind kind, double param);

// Pure fold over raw runs, in first-seen cell order. Recomputing from the raw
// JSON lines reproduces the summary exactly.
std::vector<CellSummary> summarize_runs(const std::vector<RawRun>& runs);

struct ExperimentResult {
  std::vector<RawRun> runs;
  std::vector<CellSummary> summaries;
};

using CellLogger = std::function<void(const CellSummary&, double seconds)>;

// Runs the whole grid; per-cell seeds derive from (config.seed, cell index) so
// the output is identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, const CellLogger& logger = {});

void write_raw_jsonl(const std::vector<RawRun>& runs, const std::string& path,
                     bool with_trajectories);
std::vector<RawRun> read_raw_jsonl(const std::string& path);

std::string summary_to_csv(const std::vector<CellSummary>& summaries);
void write_summary_csv(const std::vector<CellSummary>& summaries, const std::string& path);

// Plain-text tables: Type II error by budget and mean +- sd labels spent, one
// block per classifier, rows in grid order; missing cells render as an em dash.
std::string render_tables(const std::vector<CellSummary>& summaries);

// Type I series for the H0 cells, suitable for external plotting.
std::string type_i_series_csv(const std::vector<CellSummary>& summaries);

std::string to_string(StrategyConfig::Kind kind);
std::string to_string(ClassifierConfig::Kind kind);
std::string to_string(ExperimentConfig::ScenarioKind kind);

}  // namespace seqtest
