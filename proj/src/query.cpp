#include "seqtest/query.hpp"

namespace seqtest {

std::size_t select_random(const Pool& pool, Rng& rng) {
  const std::size_t remaining = pool.unqueried_count();
  if (remaining == 0)
    throw std::runtime_error("select_random: pool exhausted");
  std::uint64_t pick = rng.below(remaining);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.queried(i)) continue;
    if (pick == 0) return i;
    --pick;
  }
  throw std::logic_error("select_random: unreachable");
}

void QueryStrategy::set_estimated_priors(std::vector<double> priors) {
  if (priors.size() != config_.partition.cells.size())
    throw std::invalid_argument("QueryStrategy: estimated priors size mismatch");
  estimated_priors_ = std::move(priors);
}

const std::vector<double>& QueryStrategy::effective_priors() const {
  if (config_.known_cell_priors) return config_.partition.cell_priors;
  if (estimated_priors_.empty())
    throw std::logic_error("QueryStrategy: plug-in priors requested but never estimated");
  return estimated_priors_;
}

}  // namespace seqtest
