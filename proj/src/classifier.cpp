#include "seqtest/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seqtest {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ClassifierModel ClassifierModel::fit(const std::vector<LabeledExample>& examples,
                                     const ClassifierConfig& config) {
  if (examples.empty())
    throw std::invalid_argument("ClassifierModel::fit: empty initialization set");
  if (!(config.clip_epsilon > 0.0 && config.clip_epsilon < 0.5))
    throw std::invalid_argument("ClassifierModel::fit: clip_epsilon must lie in (0, 0.5)");
  if (config.epochs < 0 || config.step_size < 0.0 || config.l2 < 0.0 ||
      config.neighbor_count < 0)
    throw std::invalid_argument("ClassifierModel::fit: negative hyperparameter");

  ClassifierModel model;
  model.config_ = config;
  model.dim_ = examples.front().features.size();
  if (model.dim_ == 0)
    throw std::invalid_argument("ClassifierModel::fit: zero-dimensional features");
  for (const auto& ex : examples) {
    if (ex.features.size() != model.dim_)
      throw std::invalid_argument("ClassifierModel::fit: inconsistent feature dimensions");
    if (ex.label != 0 && ex.label != 1)
      throw std::invalid_argument("ClassifierModel::fit: label must be 0 or 1");
  }
  model.examples_ = examples;
  model.training_size_ = static_cast<int>(examples.size());

  if (config.standardize) {
    model.feature_mean_.assign(model.dim_, 0.0);
    model.feature_scale_.assign(model.dim_, 0.0);
    for (const auto& ex : examples)
      for (std::size_t j = 0; j < model.dim_; ++j) model.feature_mean_[j] += ex.features[j];
    for (std::size_t j = 0; j < model.dim_; ++j)
      model.feature_mean_[j] /= static_cast<double>(examples.size());
    for (const auto& ex : examples)
      for (std::size_t j = 0; j < model.dim_; ++j) {
        const double d = ex.features[j] - model.feature_mean_[j];
        model.feature_scale_[j] += d * d;
      }
    for (std::size_t j = 0; j < model.dim_; ++j) {
      const double sd = std::sqrt(model.feature_scale_[j] / static_cast<double>(examples.size()));
      model.feature_scale_[j] = sd > 0.0 ? 1.0 / sd : 0.0;
    }
  }

  if (config.kind == ClassifierConfig::Kind::Logistic) {
    model.weights_.assign(model.dim_, 0.0);
    model.bias_ = 0.0;
    model.run_gradient_epochs(config.epochs);
  }
  return model;
}

void ClassifierModel::check_dim(std::span<const double> feature) const {
  if (feature.size() != dim_)
    throw std::invalid_argument("ClassifierModel: feature dimension mismatch");
}

double ClassifierModel::standardized(std::size_t j, double value) const {
  if (feature_mean_.empty()) return value;
  return (value - feature_mean_[j]) * feature_scale_[j];
}

double ClassifierModel::logistic_raw_score(std::span<const double> feature) const {
  double score = bias_;
  for (std::size_t j = 0; j < dim_; ++j) score += weights_[j] * standardized(j, feature[j]);
  return score;
}

void ClassifierModel::run_gradient_epochs(int epochs) {
  const double m = static_cast<double>(examples_.size());
  std::vector<double> grad(dim_, 0.0);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (const auto& ex : examples_) {
      const double err = sigmoid(logistic_raw_score(ex.features)) - ex.label;
      for (std::size_t j = 0; j < dim_; ++j)
        grad[j] += err * standardized(j, ex.features[j]);
      grad_bias += err;
    }
    for (std::size_t j = 0; j < dim_; ++j)
      weights_[j] -= config_.step_size * (grad[j] / m + config_.l2 * weights_[j]);
    bias_ -= config_.step_size * grad_bias / m;
  }
}

int ClassifierModel::effective_neighbor_count() const {
  const int k = config_.neighbor_count > 0
                    ? config_.neighbor_count
                    : static_cast<int>(std::llround(std::sqrt(static_cast<double>(training_size_))));
  return std::clamp(k, 1, training_size_);
}

double ClassifierModel::knn_positive_fraction(std::span<const double> feature) const {
  const int k = effective_neighbor_count();
  // total order on (squared distance, index): distance ties resolve to the
  // lower stored index
  std::vector<std::pair<double, std::size_t>> order(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double d = standardized(j, feature[j]) - standardized(j, examples_[i].features[j]);
      d2 += d * d;
    }
    order[i] = {d2, i};
  }
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
  int ones = 0;
  for (int i = 0; i < k; ++i) ones += examples_[order[i].second].label;
  return static_cast<double>(ones) / static_cast<double>(k);
}

double ClassifierModel::predict_proba(std::span<const double> feature) const {
  check_dim(feature);
  const double raw = config_.kind == ClassifierConfig::Kind::Logistic
                         ? sigmoid(logistic_raw_score(feature))
                         : knn_positive_fraction(feature);
  return std::clamp(raw, config_.clip_epsilon, 1.0 - config_.clip_epsilon);
}

void ClassifierModel::update(const LabeledExample& example) {
  check_dim(example.features);
  if (example.label != 0 && example.label != 1)
    throw std::invalid_argument("ClassifierModel::update: label must be 0 or 1");
  examples_.push_back(example);
  ++training_size_;
  if (config_.kind == ClassifierConfig::Kind::Logistic)
    run_gradient_epochs(config_.epochs);
}

}  // namespace seqtest
