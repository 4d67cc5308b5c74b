#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "seqtest/classifier.hpp"
#include "seqtest/rng.hpp"

using namespace seqtest;

namespace {

std::vector<LabeledExample> separable_pairs() {
  std::vector<LabeledExample> out;
  for (int i = 0; i < 5; ++i) {
    out.push_back({{-1.0}, 0});
    out.push_back({{+1.0}, 1});
  }
  return out;
}

// Independent full-batch gradient descent, written directly from the loss.
struct ReferenceLogistic {
  double w = 0.0, b = 0.0;
  void train(const std::vector<LabeledExample>& data, int epochs, double step) {
    const double m = static_cast<double>(data.size());
    for (int e = 0; e < epochs; ++e) {
      double gw = 0.0, gb = 0.0;
      for (const auto& ex : data) {
        const double p = 1.0 / (1.0 + std::exp(-(w * ex.features[0] + b)));
        gw += (p - ex.label) * ex.features[0];
        gb += (p - ex.label);
      }
      w -= step * gw / m;
      b -= step * gb / m;
    }
  }
  double predict(double x) const { return 1.0 / (1.0 + std::exp(-(w * x + b))); }
};

}  // namespace

TEST_CASE("fit rejects bad inputs") {
  ClassifierConfig config;
  CHECK_THROWS_AS(ClassifierModel::fit({}, config), std::invalid_argument);
  std::vector<LabeledExample> ragged{{{1.0, 2.0}, 0}, {{1.0}, 1}};
  CHECK_THROWS_AS(ClassifierModel::fit(ragged, config), std::invalid_argument);
  std::vector<LabeledExample> bad_label{{{1.0}, 2}};
  CHECK_THROWS_AS(ClassifierModel::fit(bad_label, config), std::invalid_argument);
}

TEST_CASE("zero-epoch logistic fit is the zero model") {
  ClassifierConfig config;
  config.epochs = 0;
  std::vector<LabeledExample> ones{{{3.0, -1.0}, 1}, {{0.5, 2.0}, 1}};
  const auto model = ClassifierModel::fit(ones, config);
  CHECK(model.weights()[0] == 0.0);
  CHECK(model.weights()[1] == 0.0);
  CHECK(model.bias() == 0.0);
  CHECK(model.predict_proba(std::vector<double>{7.0, -4.0}) == 0.5);
}

TEST_CASE("knn fit is storage") {
  ClassifierConfig config;
  config.kind = ClassifierConfig::Kind::Knn;
  config.neighbor_count = 5;
  std::vector<LabeledExample> data;
  for (int i = 0; i < 10; ++i) data.push_back({{static_cast<double>(i)}, i % 2});
  const auto model = ClassifierModel::fit(data, config);
  CHECK(model.training_size() == 10);
  CHECK(model.effective_neighbor_count() == 5);
}

TEST_CASE("logistic separable training matches an independent descent run") {
  ClassifierConfig config;
  config.epochs = 200;
  config.step_size = 0.1;
  const auto data = separable_pairs();
  const auto model = ClassifierModel::fit(data, config);

  ReferenceLogistic ref;
  ref.train(data, 200, 0.1);
  CHECK(model.weights()[0] == doctest::Approx(ref.w).epsilon(1e-12));
  CHECK(model.bias() == doctest::Approx(ref.b).epsilon(1e-12));

  const double p = model.predict_proba(std::vector<double>{1.0});
  CHECK(p > 0.9);
  CHECK(p == doctest::Approx(ref.predict(1.0)).epsilon(1e-12));
}

TEST_CASE("knn probability estimates") {
  ClassifierConfig config;
  config.kind = ClassifierConfig::Kind::Knn;
  config.neighbor_count = 1;
  std::vector<LabeledExample> data{{{0.0}, 1}, {{10.0}, 0}};
  const auto one = ClassifierModel::fit(data, config);
  CHECK(one.predict_proba(std::vector<double>{0.3}) == 0.999);  // raw 1.0 clipped at 1e-3
  CHECK(one.predict_proba(std::vector<double>{9.5}) == doctest::Approx(0.001));

  // six stored points, four nearest to the probe carry labels (1,1,0,1)
  ClassifierConfig config4;
  config4.kind = ClassifierConfig::Kind::Knn;
  config4.neighbor_count = 4;
  std::vector<LabeledExample> six{
      {{0.0}, 1}, {{1.0}, 1}, {{2.0}, 0}, {{3.0}, 1}, {{50.0}, 0}, {{60.0}, 0},
  };
  const auto four = ClassifierModel::fit(six, config4);
  // brute-force check of the neighbor set on this instance
  struct Entry { double d2; std::size_t idx; };
  std::vector<Entry> dist;
  for (std::size_t i = 0; i < six.size(); ++i) {
    const double d = six[i].features[0] - 1.2;
    dist.push_back({d * d, i});
  }
  std::sort(dist.begin(), dist.end(), [](const Entry& a, const Entry& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.idx < b.idx;
  });
  int ones = 0;
  for (int i = 0; i < 4; ++i) ones += six[dist[i].idx].label;
  CHECK(ones == 3);
  CHECK(four.predict_proba(std::vector<double>{1.2}) == doctest::Approx(0.75));
}

TEST_CASE("knn distance ties break toward the lower stored index") {
  ClassifierConfig config;
  config.kind = ClassifierConfig::Kind::Knn;
  config.neighbor_count = 1;
  // both stored points are equidistant from the probe
  std::vector<LabeledExample> data{{{-1.0}, 1}, {{1.0}, 0}};
  const auto model = ClassifierModel::fit(data, config);
  CHECK(model.predict_proba(std::vector<double>{0.0}) == 0.999);
}

TEST_CASE("default neighbor count follows sqrt of the training size") {
  ClassifierConfig config;
  config.kind = ClassifierConfig::Kind::Knn;
  std::vector<LabeledExample> data;
  for (int i = 0; i < 10; ++i) data.push_back({{static_cast<double>(i)}, 0});
  auto model = ClassifierModel::fit(data, config);
  CHECK(model.effective_neighbor_count() == 3);  // round(sqrt(10))
  for (int i = 0; i < 90; ++i) model.update({{static_cast<double>(100 + i)}, 1});
  CHECK(model.effective_neighbor_count() == 10);  // round(sqrt(100))
}

TEST_CASE("updates") {
  ClassifierConfig knn_config;
  knn_config.kind = ClassifierConfig::Kind::Knn;
  std::vector<LabeledExample> data;
  for (int i = 0; i < 10; ++i) data.push_back({{static_cast<double>(i)}, i % 2});
  auto knn = ClassifierModel::fit(data, knn_config);
  knn.update({{11.0}, 1});
  CHECK(knn.training_size() == 11);

  ClassifierConfig frozen;
  frozen.epochs = 0;
  auto logistic = ClassifierModel::fit(data, frozen);
  logistic.update({{4.0}, 1});
  CHECK(logistic.training_size() == 11);
  CHECK(logistic.weights()[0] == 0.0);
  CHECK(logistic.bias() == 0.0);

  CHECK_THROWS_AS(knn.update({{1.0, 2.0}, 0}), std::invalid_argument);
}

TEST_CASE("warm-start updates sharpen a separable logistic fit monotonically") {
  ClassifierConfig config;  // default 20 epochs per call
  auto model = ClassifierModel::fit(separable_pairs(), config);

  // independent replay: same schedule, fresh implementation
  ReferenceLogistic ref;
  auto data = separable_pairs();
  ref.train(data, 20, 0.1);

  double prev = model.predict_proba(std::vector<double>{1.0});
  for (int round = 0; round < 3; ++round) {
    model.update({{+1.0}, 1});
    model.update({{-1.0}, 0});
    data.push_back({{+1.0}, 1});
    ref.train(data, 20, 0.1);
    data.push_back({{-1.0}, 0});
    ref.train(data, 20, 0.1);
    const double p = model.predict_proba(std::vector<double>{1.0});
    CHECK(p > prev);
    CHECK(p == doctest::Approx(ref.predict(1.0)).epsilon(1e-12));
    prev = p;
  }
}

TEST_CASE("predictions stay clipped and the class pair sums to one exactly") {
  ClassifierConfig config;
  config.epochs = 400;
  config.step_size = 0.5;
  auto model = ClassifierModel::fit(separable_pairs(), config);
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const double x = 20.0 * (rng.uniform01() - 0.5);
    const double p1 = model.predict_proba(std::vector<double>{x});
    CHECK(p1 >= config.clip_epsilon);
    CHECK(p1 <= 1.0 - config.clip_epsilon);
    const double p0 = 1.0 - p1;
    CHECK(p0 + p1 == 1.0);
  }
}

TEST_CASE("fit and predict are deterministic") {
  ClassifierConfig config;
  const auto a = ClassifierModel::fit(separable_pairs(), config);
  const auto b = ClassifierModel::fit(separable_pairs(), config);
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const double x = 6.0 * (rng.uniform01() - 0.5);
    CHECK(a.predict_proba(std::vector<double>{x}) == b.predict_proba(std::vector<double>{x}));
  }
}

TEST_CASE("standardization statistics come from the initialization set only") {
  ClassifierConfig config;
  config.standardize = true;
  config.epochs = 50;
  std::vector<LabeledExample> init{{{100.0}, 0}, {{104.0}, 1}, {{96.0}, 0}, {{108.0}, 1}};
  auto model = ClassifierModel::fit(init, config);
  const double before = model.predict_proba(std::vector<double>{102.0});
  // a wildly out-of-scale update must not shift the standardization frame
  model.update({{1e6}, 1});
  const double after = model.predict_proba(std::vector<double>{102.0});
  CHECK(std::isfinite(before));
  CHECK(std::isfinite(after));
  CHECK(model.training_size() == 5);
}

TEST_CASE("dimension mismatch is a data error") {
  ClassifierConfig config;
  const auto model = ClassifierModel::fit(separable_pairs(), config);
  CHECK_THROWS_AS(model.predict_proba(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}
