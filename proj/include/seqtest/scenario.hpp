#pragma once

#include <string>
#include <vector>

#include "seqtest/pool.hpp"
#include "seqtest/rng.hpp"

namespace seqtest {

// Two unit-covariance Gaussians with means (-delta, 0, ...) for class 0 and
// (+delta, 0, ...) for class 1. delta = 0 makes features independent of labels,
// i.e. the null holds by construction.
struct GaussianScenario {
  double delta = 0.0;
  double prior0 = 0.5;  // P(Z=0)
  int dim = 2;
  int pool_size = 2000;
};

// Synthetic stand-in for the contaminated-sample construction: class 0 draws
// from component A; class 1 draws from A with probability mixture_ratio and
// from component B otherwise. mixture_ratio = 1 yields the null. Component C
// is available for scenario variants but unused by the default construction.
struct MixtureScenario {
  std::vector<double> mean_a{0.0, 0.0};
  std::vector<double> mean_b{3.0, 0.0};
  std::vector<double> mean_c{0.0, 3.0};
  double mixture_ratio = 0.7;
  double prior0 = 0.5;
  int pool_size = 2000;
};

// Each item: the label is drawn first (Bernoulli(1 - prior0) for Z = 1), then
// the feature from the class-conditional distribution.
Pool gen_gaussian_pool(const GaussianScenario& scenario, Rng& rng);
Pool gen_mixture_pool(const MixtureScenario& scenario, Rng& rng);

// CSV pools: header f0,...,f{d-1},z, UTF-8, '.' decimal point, no missing
// values. load throws std::runtime_error naming the offending line on
// non-numeric cells, a missing label column, or labels outside {0, 1}.
Pool load_csv_pool(const std::string& path, const std::string& label_column = "z");
void save_csv_pool(const Pool& pool, const std::string& path);

}  // namespace seqtest
