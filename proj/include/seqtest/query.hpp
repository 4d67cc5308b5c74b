#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqtest/pool.hpp"
#include "seqtest/rng.hpp"
#include "seqtest/theory.hpp"

namespace seqtest {

// The Model parameter needs only predict_proba(span<const double>) -> double,
// i.e. a ClassifierModel or a test stand-in.

// Bimodal query: a fair coin picks the class mode, then the unqueried item with
// the highest predicted probability for that class is returned. Probability
// ties resolve to the lowest pool index. The caller marks the item after the
// oracle answers.
template <class Model>
std::size_t select_bimodal(const Pool& pool, const Model& model, Rng& rng) {
  if (pool.unqueried_count() == 0)
    throw std::runtime_error("select_bimodal: pool exhausted");
  const bool class0_mode = rng.fair_coin();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_key = -1.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.queried(i)) continue;
    const double p1 = model.predict_proba(pool.feature(i));
    const double key = class0_mode ? 1.0 - p1 : p1;
    if (best == std::numeric_limits<std::size_t>::max() || key > best_key) {
      best = i;
      best_key = key;
    }
  }
  return best;
}

// Uniform draw over the unqueried items.
std::size_t select_random(const Pool& pool, Rng& rng);

struct StrategyConfig {
  enum class Kind { Bimodal, Random, Partition };
  Kind kind = Kind::Bimodal;

  // Kind::Partition only
  Partition partition;
  bool known_cell_priors = true;   // false: plug-in priors from initialization labels
  bool reestimate_cell = false;    // re-pick the target cell on every step
};

// Per-run query strategy. Stateless except for the cached target cell of the
// partition-restricted strategy, which is fixed at the first selection.
class QueryStrategy {
 public:
  explicit QueryStrategy(StrategyConfig config) : config_(std::move(config)) {}

  template <class Model>
  std::size_t select(const Pool& pool, const Model& model, Rng& rng) {
    switch (config_.kind) {
      case StrategyConfig::Kind::Bimodal:
        return select_bimodal(pool, model, rng);
      case StrategyConfig::Kind::Random:
        return select_random(pool, rng);
      case StrategyConfig::Kind::Partition:
        return select_partition(pool, model, rng);
    }
    throw std::logic_error("QueryStrategy: unknown kind");
  }

  const StrategyConfig& config() const { return config_; }
  std::optional<std::size_t> chosen_cell() const { return chosen_cell_; }

  // Plug-in estimate of P(Z=0 | A_i) from labeled initialization data, used when
  // known_cell_priors is off. Call before the first selection.
  void set_estimated_priors(std::vector<double> priors);

 private:
  template <class Model>
  std::size_t select_partition(const Pool& pool, const Model& model, Rng& rng) {
    if (!chosen_cell_ || config_.reestimate_cell)
      chosen_cell_ = pick_target_cell(pool, model);
    const auto& members = config_.partition.cells[*chosen_cell_];
    std::size_t remaining = 0;
    for (std::size_t idx : members) remaining += pool.queried(idx) ? 0 : 1;
    if (remaining == 0)
      throw std::runtime_error("select_partition: target cell exhausted");
    std::uint64_t pick = rng.below(remaining);
    for (std::size_t idx : members) {
      if (pool.queried(idx)) continue;
      if (pick == 0) return idx;
      --pick;
    }
    throw std::logic_error("select_partition: unreachable");
  }

  // Highest estimated conditional MI wins; ties go to the lowest cell index.
  // Cells with no unqueried members cannot be selected.
  template <class Model>
  std::size_t pick_target_cell(const Pool& pool, const Model& model) const {
    const auto& priors = effective_priors();
    std::optional<std::size_t> best;
    double best_mi = 0.0;
    std::vector<double> q0;
    for (std::size_t c = 0; c < config_.partition.cells.size(); ++c) {
      q0.clear();
      for (std::size_t idx : config_.partition.cells[c])
        if (!pool.queried(idx)) q0.push_back(1.0 - model.predict_proba(pool.feature(idx)));
      if (q0.empty()) continue;
      const double mi = estimate_conditional_mi(priors[c], q0);
      if (!best || mi > best_mi) {
        best = c;
        best_mi = mi;
      }
    }
    if (!best)
      throw std::runtime_error("select_partition: all cells exhausted");
    return *best;
  }

  const std::vector<double>& effective_priors() const;

  StrategyConfig config_;
  std::optional<std::size_t> chosen_cell_;
  std::vector<double> estimated_priors_;
};

}  // namespace seqtest
