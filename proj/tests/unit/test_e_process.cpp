#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "seqtest/e_process.hpp"
#include "seqtest/rng.hpp"

using namespace seqtest;

TEST_CASE("log_prior_numerator matches hand-evaluated values") {
  CHECK(log_prior_numerator(2, 4) == doctest::Approx(4.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(log_prior_numerator(0, 5) == 0.0);  // one-class sequence, 0*log 0 = 0
  CHECK(log_prior_numerator(5, 5) == 0.0);
  // frozen via independent arbitrary-precision evaluation
  CHECK(log_prior_numerator(3, 10) == doctest::Approx(-6.108643020548936).epsilon(1e-12));
}

TEST_CASE("log_prior_numerator rejects invalid arguments") {
  CHECK_THROWS_AS(log_prior_numerator(0, 0), std::domain_error);
  CHECK_THROWS_AS(log_prior_numerator(-1, 4), std::domain_error);
  CHECK_THROWS_AS(log_prior_numerator(5, 4), std::domain_error);
}

TEST_CASE("push_observation single step") {
  EProcessState state;
  state = push_observation(state, 1, 0.5);
  CHECK(state.n == 1);
  CHECK(state.k == 1);
  CHECK(state.log_w == doctest::Approx(0.6931471805599453).epsilon(1e-12));
}

TEST_CASE("push_observation uniform predictor with balanced labels gives w = 1") {
  EProcessState state;
  state = push_observation(state, 1, 0.5);
  state = push_observation(state, 0, 0.5);
  CHECK(state.log_w == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("push_observation three-step hand evaluation") {
  EProcessState state;
  state = push_observation(state, 1, 0.8);
  state = push_observation(state, 1, 0.8);
  state = push_observation(state, 0, 0.2);
  CHECK(state.log_w == doctest::Approx(0.14618251017808115).epsilon(1e-10));
  CHECK(state.n == 3);
  CHECK(state.k == 2);
  CHECK(state.log_denominator < 0.0);
}

TEST_CASE("push_observation flags missing clipping") {
  EProcessState state;
  CHECK_THROWS_AS(push_observation(state, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(push_observation(state, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(push_observation(state, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(push_observation(state, 2, 0.5), std::invalid_argument);
}

TEST_CASE("decide thresholds") {
  EProcessState state;
  state.n = 1;
  state.log_w = std::log(0.04);
  CHECK(decide(state, 0.05, 7) == Decision::Reject);
  state.log_w = 0.5;
  CHECK(decide(state, 0.05, 0) == Decision::Retain);
  CHECK(decide(state, 0.05, 3) == Decision::Continue);
  CHECK_THROWS_AS(decide(state, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(decide(state, 1.0, 3), std::invalid_argument);
  // exact boundary: w == alpha rejects
  state.log_w = std::log(0.05);
  CHECK(decide(state, 0.05, 3) == Decision::Reject);
}

TEST_CASE("decide depends only on the state fields") {
  EProcessState a;
  a.n = 12;
  a.k = 4;
  a.log_denominator = -7.0;
  a.log_w = -1.0;
  EProcessState b = a;
  for (int remaining : {0, 1, 5})
    CHECK(decide(a, 0.05, remaining) == decide(b, 0.05, remaining));
}

TEST_CASE("MLE prior dominates every fixed Bernoulli prior") {
  Rng rng(20240511);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(200));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    double p = rng.uniform01();
    if (p <= 0.0 || p >= 1.0) p = 0.5;
    const double fixed_prior = k * std::log(p) + (n - k) * std::log(1.0 - p);
    CHECK(log_prior_numerator(k, n) >= fixed_prior - 1e-12);
  }
}

TEST_CASE("incremental pushes equal a from-scratch evaluation") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(400));
    EProcessState state;
    int ones = 0;
    double log_q_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const int z = rng.fair_coin() ? 1 : 0;
      const double q = 0.001 + 0.998 * rng.uniform01();
      ones += z;
      log_q_sum += std::log(q);
      state = push_observation(state, z, q);
    }
    const double direct = log_prior_numerator(ones, n) - log_q_sum;
    CHECK(state.log_w == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::fabs(state.log_w - direct) < 1e-12 * std::max(1.0, std::fabs(direct)));
  }
}
