#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "seqtest/classifier.hpp"
#include "seqtest/e_process.hpp"
#include "seqtest/pool.hpp"
#include "seqtest/query.hpp"
#include "seqtest/rng.hpp"

namespace seqtest {

struct RunConfig {
  int init_labels = 10;     // N0, spent before the sequential loop starts
  int label_budget = 1000;  // Nq, counts initialization plus sequential queries
  double alpha = 0.05;
  ClassifierConfig classifier;
  StrategyConfig strategy;
  std::uint64_t seed = 0;
  bool record_trajectory = true;
};

struct RunRecord {
  Decision verdict = Decision::Retain;
  int stopping_step = 0;       // post-initialization queries consumed
  int labels_spent_total = 0;  // init_labels + stopping_step
  std::vector<double> log_w_trajectory;
  std::uint64_t seed = 0;
};

// Snapshot handed to the observer after each statistic update, before the model
// update. training_size_at_prediction is the size of the model that produced
// q_z; the prequential contract requires it to equal N0 + (step - 1).
struct StepTrace {
  int step = 0;  // 1-based
  std::size_t pool_index = 0;
  int training_size_at_prediction = 0;
  int z = 0;
  double q_z = 0.0;
  double log_w = 0.0;
};
using StepObserver = std::function<void(const StepTrace&)>;

namespace detail {

void check_run_config(const RunConfig& config, const Pool& pool);

std::vector<double> estimate_cell_priors(const Partition& partition,
                                         const std::vector<std::size_t>& init_indices,
                                         const std::vector<LabeledExample>& init_examples);

}  // namespace detail

// Core loop, generic over the model so tests can drive it with frozen
// predictors. `factory` turns the initialization examples into a model with
// predict_proba / update / training_size. One step of the loop: select, query
// the oracle, score the observed label with the pre-update model, fold it into
// the statistic, decide, and only then (when continuing) update the model.
template <class ModelFactory>
RunRecord run_test_with_factory(const RunConfig& config, Pool& pool, const LabelOracle& oracle,
                                const ModelFactory& factory, const StepObserver& observer = {}) {
  detail::check_run_config(config, pool);
  Rng rng(config.seed);

  // initialization: N0 labels drawn uniformly without replacement
  std::vector<std::size_t> init_indices;
  std::vector<LabeledExample> init_examples;
  init_indices.reserve(config.init_labels);
  init_examples.reserve(config.init_labels);
  for (int t = 0; t < config.init_labels; ++t) {
    const std::size_t idx = select_random(pool, rng);
    const int z = oracle(idx);
    pool.mark_queried(idx);
    init_indices.push_back(idx);
    init_examples.push_back({std::vector<double>(pool.feature(idx).begin(), pool.feature(idx).end()), z});
  }

  auto model = factory(init_examples);

  QueryStrategy strategy(config.strategy);
  if (config.strategy.kind == StrategyConfig::Kind::Partition &&
      !config.strategy.known_cell_priors) {
    strategy.set_estimated_priors(
        detail::estimate_cell_priors(config.strategy.partition, init_indices, init_examples));
  }

  RunRecord record;
  record.seed = config.seed;
  const int budget_steps = config.label_budget - config.init_labels;
  record.verdict = Decision::Retain;
  record.stopping_step = budget_steps;
  if (config.record_trajectory) record.log_w_trajectory.reserve(budget_steps);

  EProcessState state;
  for (int step = 1; step <= budget_steps; ++step) {
    const std::size_t idx = strategy.select(pool, model, rng);
    const int z = oracle(idx);
    pool.mark_queried(idx);

    const int size_at_prediction = model.training_size();
    const double p1 = model.predict_proba(pool.feature(idx));
    const double q_z = z == 1 ? p1 : 1.0 - p1;
    state = push_observation(state, z, q_z);
    if (config.record_trajectory) record.log_w_trajectory.push_back(state.log_w);
    if (observer) observer({step, idx, size_at_prediction, z, q_z, state.log_w});

    const Decision decision = decide(state, config.alpha, budget_steps - step);
    if (decision == Decision::Reject) {
      record.verdict = Decision::Reject;
      record.stopping_step = step;
      break;
    }
    if (decision == Decision::Retain) {
      record.verdict = Decision::Retain;
      record.stopping_step = step;
      break;
    }
    model.update({std::vector<double>(pool.feature(idx).begin(), pool.feature(idx).end()), z});
  }

  record.labels_spent_total = config.init_labels + record.stopping_step;
  return record;
}

// Algorithm entry point with the configured classifier.
RunRecord run_test(const RunConfig& config, Pool& pool, const LabelOracle& oracle,
                   const StepObserver& observer = {});

// Builds a fresh pool for one replication from that replication's stream.
using PoolFactory = std::function<Pool(Rng&)>;

// Materializes the partition-strategy index sets against a replication's pool.
using PartitionBuilder = std::function<Partition(const Pool&)>;

// Independent replications with per-run streams derived from (base_seed, index).
// Replications may run on several threads; records land in replication order
// regardless of scheduling.
std::vector<RunRecord> run_batch(const RunConfig& config, const PoolFactory& pool_factory,
                                 int replications, std::uint64_t base_seed, int threads = 1,
                                 const PartitionBuilder& partition_builder = {});

}  // namespace seqtest
