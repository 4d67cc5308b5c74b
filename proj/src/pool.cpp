#include "seqtest/pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqtest {

Pool::Pool(std::vector<std::vector<double>> features, std::vector<int> hidden_labels) {
  if (features.size() != hidden_labels.size())
    throw std::invalid_argument("Pool: features and labels differ in length");
  if (features.empty())
    throw std::invalid_argument("Pool: empty pool");
  dim_ = features.front().size();
  if (dim_ == 0)
    throw std::invalid_argument("Pool: zero-dimensional features");
  storage_.reserve(features.size() * dim_);
  for (const auto& f : features) {
    if (f.size() != dim_)
      throw std::invalid_argument("Pool: inconsistent feature dimensions");
    storage_.insert(storage_.end(), f.begin(), f.end());
  }
  for (int z : hidden_labels)
    if (z != 0 && z != 1)
      throw std::invalid_argument("Pool: labels must be 0 or 1");
  labels_ = std::move(hidden_labels);
  queried_.assign(labels_.size(), 0);
}

void Pool::mark_queried(std::size_t i) {
  if (i >= labels_.size())
    throw std::out_of_range("Pool::mark_queried: index out of range");
  if (queried_[i])
    throw std::logic_error("Pool::mark_queried: item already queried");
  queried_[i] = 1;
  ++queried_count_;
}

void Pool::reset_queries() {
  std::fill(queried_.begin(), queried_.end(), 0);
  queried_count_ = 0;
}

void validate_partition(const Partition& partition, std::size_t pool_size) {
  if (partition.cells.empty())
    throw std::invalid_argument("Partition: no cells");
  if (partition.cells.size() != partition.cell_priors.size())
    throw std::invalid_argument("Partition: cells/priors size mismatch");
  for (double p : partition.cell_priors)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("Partition: cell prior outside [0, 1]");
  std::vector<char> seen(pool_size, 0);
  std::size_t covered = 0;
  for (const auto& cell : partition.cells) {
    for (std::size_t idx : cell) {
      if (idx >= pool_size)
        throw std::invalid_argument("Partition: index out of pool range");
      if (seen[idx])
        throw std::invalid_argument("Partition: overlapping cells");
      seen[idx] = 1;
      ++covered;
    }
  }
  if (covered != pool_size)
    throw std::invalid_argument("Partition: cells do not cover the pool");
}

}  // namespace seqtest
