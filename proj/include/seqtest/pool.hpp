#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace seqtest {

// Answers "what is the label of pool item i". The engine only ever reads labels
// through this boundary; programmatic oracles wrap a pool's masked labels.
using LabelOracle = std::function<int(std::size_t)>;

// Ordered collection of unlabeled feature vectors with ground-truth labels that
// stay hidden behind the oracle interface. The queried mask enforces sampling
// without replacement: an item, once queried, is never selectable again.
class Pool {
 public:
  Pool(std::vector<std::vector<double>> features, std::vector<int> hidden_labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> feature(std::size_t i) const {
    return {storage_.data() + i * dim_, dim_};
  }

  bool queried(std::size_t i) const { return queried_[i] != 0; }
  std::size_t unqueried_count() const { return size() - queried_count_; }
  void mark_queried(std::size_t i);  // throws if already queried
  void reset_queries();

  // For oracles and serialization only; query strategies must not touch labels.
  const std::vector<int>& hidden_labels() const { return labels_; }

  // Oracle reading this pool's hidden labels. The pool must outlive the handle.
  LabelOracle oracle() const {
    return [this](std::size_t i) { return labels_.at(i); };
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> storage_;  // row-major, size() * dim()
  std::vector<int> labels_;
  std::vector<char> queried_;
  std::size_t queried_count_ = 0;
};

// Disjoint index sets covering the pool, with a known class-0 prior per cell.
struct Partition {
  std::vector<std::vector<std::size_t>> cells;
  std::vector<double> cell_priors;  // P(Z=0 | A_i)
};

// Throws std::invalid_argument unless the cells cover [0, pool_size) exactly once
// and each cell has a prior in [0, 1].
void validate_partition(const Partition& partition, std::size_t pool_size);

}  // namespace seqtest
