#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqtest/engine.hpp"
#include "seqtest/scenario.hpp"

using namespace seqtest;

namespace {

// Predicts a fixed probability for whichever label the oracle just revealed;
// the oracle wrapper below records it. Stands in for "frozen classifier with
// Q(observed z | s) = prob" from the statistic's hand examples.
struct FrozenModel {
  std::shared_ptr<int> last_label;
  double prob = 0.9;
  int size = 0;
  double predict_proba(std::span<const double>) const {
    return *last_label == 1 ? prob : 1.0 - prob;
  }
  void update(const LabeledExample&) { ++size; }
  int training_size() const { return size; }
};

struct FrozenHarness {
  std::shared_ptr<int> last_label = std::make_shared<int>(0);
  std::shared_ptr<int> loop_calls = std::make_shared<int>(0);
  int init_labels;

  explicit FrozenHarness(int n0) : init_labels(n0) {}

  // alternating labels 1,0,1,0,... during the sequential loop, balanced init
  LabelOracle oracle() {
    auto last = last_label;
    auto calls = loop_calls;
    const int n0 = init_labels;
    return [last, calls, n0](std::size_t) {
      const int call = (*calls)++;
      const int z = call < n0 ? call % 2 : (call - n0) % 2 == 0 ? 1 : 0;
      *last = z;
      return z;
    };
  }

  auto factory(double prob, int n0) {
    auto last = last_label;
    return [last, prob, n0](const std::vector<LabeledExample>&) {
      return FrozenModel{last, prob, n0};
    };
  }
};

Pool dummy_pool(int size) {
  std::vector<std::vector<double>> features(size, std::vector<double>{0.0});
  std::vector<int> labels(size, 0);
  return Pool(std::move(features), std::move(labels));
}

RunConfig frozen_config(int budget) {
  RunConfig config;
  config.init_labels = 4;
  config.label_budget = budget;
  config.alpha = 0.05;
  config.strategy.kind = StrategyConfig::Kind::Random;
  config.seed = 99;
  return config;
}

}  // namespace

TEST_CASE("balanced labels against a confident frozen predictor reject at step six") {
  FrozenHarness harness(4);
  Pool pool = dummy_pool(64);
  const RunConfig config = frozen_config(20);
  const RunRecord record = run_test_with_factory(config, pool, harness.oracle(),
                                                 harness.factory(0.9, config.init_labels));
  CHECK(record.verdict == Decision::Reject);
  CHECK(record.stopping_step == 6);
  CHECK(record.labels_spent_total == 10);
  REQUIRE(record.log_w_trajectory.size() == 6);
  CHECK(record.log_w_trajectory.back() ==
        doctest::Approx(6.0 * std::log(0.5) - 6.0 * std::log(0.9)).epsilon(1e-12));
  CHECK(record.log_w_trajectory.back() <= std::log(0.05));
  CHECK(record.log_w_trajectory[4] > std::log(0.05));
}

TEST_CASE("an uninformative frozen predictor never rejects") {
  FrozenHarness harness(4);
  Pool pool = dummy_pool(64);
  const RunConfig config = frozen_config(40);
  const RunRecord record = run_test_with_factory(config, pool, harness.oracle(),
                                                 harness.factory(0.5, config.init_labels));
  CHECK(record.verdict == Decision::Retain);
  CHECK(record.stopping_step == 36);
  CHECK(record.labels_spent_total == 40);
  // the maximized prior dominates the uniform denominator, so log_w >= 0 throughout
  for (double lw : record.log_w_trajectory) CHECK(lw >= -1e-12);
}

TEST_CASE("no observation is pushed after a terminal verdict") {
  FrozenHarness harness(4);
  Pool pool = dummy_pool(64);
  const RunConfig config = frozen_config(20);
  int steps_seen = 0;
  const RunRecord record = run_test_with_factory(
      config, pool, harness.oracle(), harness.factory(0.9, config.init_labels),
      [&](const StepTrace& trace) {
        ++steps_seen;
        CHECK(trace.step == steps_seen);
      });
  CHECK(record.verdict == Decision::Reject);
  CHECK(steps_seen == record.stopping_step);
  // init labels + loop queries is all the pool ever gave out
  CHECK(pool.size() - pool.unqueried_count() ==
        static_cast<std::size_t>(record.labels_spent_total));
}

TEST_CASE("prequential discipline: the scoring model excludes the scored example") {
  GaussianScenario scenario;
  scenario.delta = 0.3;
  scenario.pool_size = 100;
  Rng pool_rng(7);
  Pool pool = gen_gaussian_pool(scenario, pool_rng);

  RunConfig config;
  config.init_labels = 10;
  config.label_budget = 60;
  config.strategy.kind = StrategyConfig::Kind::Bimodal;
  config.classifier.epochs = 5;
  config.seed = 1234;
  run_test(config, pool, pool.oracle(), [&](const StepTrace& trace) {
    CHECK(trace.training_size_at_prediction == config.init_labels + trace.step - 1);
    CHECK(trace.q_z >= config.classifier.clip_epsilon);
    CHECK(trace.q_z <= 1.0 - config.classifier.clip_epsilon);
  });
}

TEST_CASE("selected indices never repeat within a run") {
  GaussianScenario scenario;
  scenario.delta = 0.0;
  scenario.pool_size = 80;
  Rng pool_rng(8);
  Pool pool = gen_gaussian_pool(scenario, pool_rng);

  RunConfig config;
  config.init_labels = 5;
  config.label_budget = 80;
  config.alpha = 1e-9;  // make rejection practically impossible
  config.strategy.kind = StrategyConfig::Kind::Bimodal;
  config.classifier.epochs = 2;
  config.seed = 5150;
  std::set<std::size_t> seen;
  run_test(config, pool, pool.oracle(),
           [&](const StepTrace& trace) { CHECK(seen.insert(trace.pool_index).second); });
  CHECK(seen.size() == 75);
  CHECK(pool.unqueried_count() == 0);
}

TEST_CASE("run_test validates its inputs") {
  Pool pool = dummy_pool(10);
  RunConfig config;
  config.init_labels = 10;
  config.label_budget = 20;
  CHECK_THROWS_AS(run_test(config, pool, pool.oracle()), std::invalid_argument);
  config.label_budget = 5;
  CHECK_THROWS_AS(run_test(config, pool, pool.oracle()), std::invalid_argument);
  config.init_labels = 2;
  config.label_budget = 8;
  config.alpha = 1.5;
  CHECK_THROWS_AS(run_test(config, pool, pool.oracle()), std::invalid_argument);
}

TEST_CASE("run_batch is deterministic and order-stable") {
  GaussianScenario scenario;
  scenario.delta = 0.4;
  scenario.pool_size = 120;
  const PoolFactory factory = [scenario](Rng& rng) { return gen_gaussian_pool(scenario, rng); };

  RunConfig config;
  config.init_labels = 8;
  config.label_budget = 100;
  config.classifier.epochs = 5;
  config.strategy.kind = StrategyConfig::Kind::Bimodal;

  const auto once = run_batch(config, factory, 6, 2024, 1);
  const auto again = run_batch(config, factory, 6, 2024, 3);  // different thread count
  REQUIRE(once.size() == again.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].verdict == again[i].verdict);
    CHECK(once[i].stopping_step == again[i].stopping_step);
    CHECK(once[i].seed == again[i].seed);
    CHECK(once[i].log_w_trajectory == again[i].log_w_trajectory);
  }

  // a single replication reproduces run_test under the derived stream
  const auto single = run_batch(config, factory, 1, 777, 1);
  const std::uint64_t root = derive_stream_seed(777, 0);
  Rng pool_rng(derive_stream_seed(root, 0));
  Pool pool = factory(pool_rng);
  RunConfig direct = config;
  direct.seed = derive_stream_seed(root, 1);
  const RunRecord manual = run_test(direct, pool, pool.oracle());
  CHECK(single[0].verdict == manual.verdict);
  CHECK(single[0].stopping_step == manual.stopping_step);
  CHECK(single[0].log_w_trajectory == manual.log_w_trajectory);
}

TEST_CASE("anytime validity holds under the null for both strategies") {
  GaussianScenario scenario;
  scenario.delta = 0.0;
  scenario.pool_size = 200;
  const PoolFactory factory = [scenario](Rng& rng) { return gen_gaussian_pool(scenario, rng); };

  RunConfig config;
  config.init_labels = 10;
  config.label_budget = 120;
  config.alpha = 0.05;
  config.classifier.epochs = 10;
  config.record_trajectory = false;

  for (auto kind : {StrategyConfig::Kind::Bimodal, StrategyConfig::Kind::Random}) {
    config.strategy.kind = kind;
    const int reps = 300;
    const auto records = run_batch(config, factory, reps, 90210, 2);
    int rejections = 0;
    for (const auto& r : records) rejections += r.verdict == Decision::Reject ? 1 : 0;
    // alpha + 3 binomial sigma at 300 replications
    CHECK(static_cast<double>(rejections) / reps < 0.05 + 0.038);
  }
}

TEST_CASE("rejection-by-budget is monotone along a trajectory prefix") {
  GaussianScenario scenario;
  scenario.delta = 0.5;
  scenario.pool_size = 250;
  const PoolFactory factory = [scenario](Rng& rng) { return gen_gaussian_pool(scenario, rng); };

  RunConfig config;
  config.init_labels = 10;
  config.label_budget = 250;
  config.classifier.epochs = 10;
  config.strategy.kind = StrategyConfig::Kind::Bimodal;

  const auto records = run_batch(config, factory, 40, 31415, 2);
  const double log_alpha = std::log(config.alpha);
  int prev = -1;
  for (int budget : {60, 110, 160, 210, 250}) {
    int rejected = 0;
    for (const auto& r : records) {
      const int steps = budget - config.init_labels;
      const int horizon = std::min<int>(steps, static_cast<int>(r.log_w_trajectory.size()));
      for (int i = 0; i < horizon; ++i) {
        if (r.log_w_trajectory[i] <= log_alpha) {
          ++rejected;
          break;
        }
      }
    }
    CHECK(rejected >= prev);
    prev = rejected;
  }
  CHECK(prev > 30);  // delta = 0.5 is an easy problem; most runs reject by the full budget
}
