#include "seqtest/engine.hpp"

#include <thread>

namespace seqtest {

namespace detail {

void check_run_config(const RunConfig& config, const Pool& pool) {
  if (config.init_labels < 1)
    throw std::invalid_argument("run_test: need at least one initialization label");
  if (config.init_labels >= config.label_budget)
    throw std::invalid_argument("run_test: label budget must exceed the initialization size");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw std::invalid_argument("run_test: alpha must lie in (0, 1)");
  if (pool.unqueried_count() < static_cast<std::size_t>(config.label_budget))
    throw std::invalid_argument("run_test: pool smaller than the label budget");
  if (config.strategy.kind == StrategyConfig::Kind::Partition)
    validate_partition(config.strategy.partition, pool.size());
}

std::vector<double> estimate_cell_priors(const Partition& partition,
                                         const std::vector<std::size_t>& init_indices,
                                         const std::vector<LabeledExample>& init_examples) {
  std::vector<std::size_t> cell_of(init_indices.size());
  for (std::size_t c = 0; c < partition.cells.size(); ++c)
    for (std::size_t idx : partition.cells[c])
      for (std::size_t t = 0; t < init_indices.size(); ++t)
        if (init_indices[t] == idx) cell_of[t] = c;
  std::vector<double> zeros(partition.cells.size(), 0.0);
  std::vector<double> counts(partition.cells.size(), 0.0);
  for (std::size_t t = 0; t < init_indices.size(); ++t) {
    counts[cell_of[t]] += 1.0;
    zeros[cell_of[t]] += init_examples[t].label == 0 ? 1.0 : 0.0;
  }
  std::vector<double> priors(partition.cells.size(), 0.5);  // uninformed cells stay at 1/2
  for (std::size_t c = 0; c < priors.size(); ++c)
    if (counts[c] > 0.0) priors[c] = zeros[c] / counts[c];
  return priors;
}

}  // namespace detail

RunRecord run_test(const RunConfig& config, Pool& pool, const LabelOracle& oracle,
                   const StepObserver& observer) {
  return run_test_with_factory(
      config, pool, oracle,
      [&config](const std::vector<LabeledExample>& init) {
        return ClassifierModel::fit(init, config.classifier);
      },
      observer);
}

std::vector<RunRecord> run_batch(const RunConfig& config, const PoolFactory& pool_factory,
                                 int replications, std::uint64_t base_seed, int threads,
                                 const PartitionBuilder& partition_builder) {
  if (replications < 1)
    throw std::invalid_argument("run_batch: need at least one replication");
  std::vector<RunRecord> records(replications);

  auto run_one = [&](int r) {
    const std::uint64_t root = derive_stream_seed(base_seed, static_cast<std::uint64_t>(r));
    Rng pool_rng(derive_stream_seed(root, 0));
    Pool pool = pool_factory(pool_rng);
    RunConfig run_config = config;
    run_config.seed = derive_stream_seed(root, 1);
    if (partition_builder) run_config.strategy.partition = partition_builder(pool);
    records[r] = run_test(run_config, pool, pool.oracle());
  };

  if (threads <= 1 || replications == 1) {
    for (int r = 0; r < replications; ++r) run_one(r);
    return records;
  }

  const int worker_count = std::min(threads, replications);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      for (int r = w; r < replications; r += worker_count) run_one(r);
    });
  }
  for (auto& t : workers) t.join();
  return records;
}

}  // namespace seqtest
