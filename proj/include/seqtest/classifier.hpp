#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqtest {

struct LabeledExample {
  std::vector<double> features;
  int label = 0;  // z in {0, 1}
};

struct ClassifierConfig {
  enum class Kind { Logistic, Knn };
  Kind kind = Kind::Logistic;

  // logistic: full-batch gradient epochs run by fit() and by every update()
  int epochs = 20;
  double step_size = 0.1;
  double l2 = 0.0;

  // knn: 0 means max(1, round(sqrt(training_size)))
  int neighbor_count = 0;

  double clip_epsilon = 1e-3;

  // z-score features using statistics of the initialization set only, so later
  // updates cannot leak into earlier predictions
  bool standardize = false;
};

// Probabilistic class predictor Q(z|s) with a prequential contract: the engine
// always predicts with the model as-of the previous step before updating it.
// Models are plain values; copying or moving one between runs is safe.
class ClassifierModel {
 public:
  // Deterministic given (examples, config). Throws on an empty example list or
  // inconsistent feature dimensions.
  static ClassifierModel fit(const std::vector<LabeledExample>& examples,
                             const ClassifierConfig& config);

  // Clipped P(Z=1 | s) in [clip_epsilon, 1 - clip_epsilon]. The class-0
  // probability is its exact complement.
  double predict_proba(std::span<const double> feature) const;

  // Fold one labeled example in. Logistic refits warm-started over everything
  // seen so far; knn appends to storage.
  void update(const LabeledExample& example);

  int training_size() const { return training_size_; }
  std::size_t dim() const { return dim_; }
  const ClassifierConfig& config() const { return config_; }

  // Neighbor count a knn prediction would use right now.
  int effective_neighbor_count() const;

  // Logistic parameters, for inspection in tests; empty/0 for knn.
  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  ClassifierModel() = default;
  void check_dim(std::span<const double> feature) const;
  double standardized(std::size_t j, double value) const;
  void run_gradient_epochs(int epochs);
  double logistic_raw_score(std::span<const double> feature) const;
  double knn_positive_fraction(std::span<const double> feature) const;

  ClassifierConfig config_;
  std::size_t dim_ = 0;
  int training_size_ = 0;

  std::vector<LabeledExample> examples_;  // knn storage; logistic refit corpus

  // logistic state
  std::vector<double> weights_;
  double bias_ = 0.0;

  // standardization statistics from the initialization set
  std::vector<double> feature_mean_;
  std::vector<double> feature_scale_;  // 1/sd, 0 where the init set was constant
};

}  // namespace seqtest
