#include "seqtest/e_process.hpp"

#include <cmath>
#include <stdexcept>

namespace seqtest {

double log_prior_numerator(int k, int n) {
  if (n < 1)
    throw std::domain_error("log_prior_numerator: statistic undefined before the first observation");
  if (k < 0 || k > n)
    throw std::domain_error("log_prior_numerator: k must satisfy 0 <= k <= n");
  const double total = static_cast<double>(n);
  double out = 0.0;
  if (k > 0) out += k * std::log(k / total);
  if (k < n) out += (n - k) * std::log((n - k) / total);
  return out;
}

EProcessState push_observation(const EProcessState& state, int z, double q_z) {
  if (z != 0 && z != 1)
    throw std::invalid_argument("push_observation: label must be 0 or 1");
  if (!(q_z > 0.0 && q_z < 1.0))
    throw std::invalid_argument("push_observation: q_z outside (0, 1); classifier clipping missing upstream");
  EProcessState next;
  next.n = state.n + 1;
  next.k = state.k + z;
  next.log_denominator = state.log_denominator + std::log(q_z);
  next.log_w = log_prior_numerator(next.k, next.n) - next.log_denominator;
  return next;
}

Decision decide(const EProcessState& state, double alpha, int labels_remaining) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("decide: alpha must lie in (0, 1)");
  if (state.n < 1)
    throw std::domain_error("decide: no observations yet");
  if (state.log_w <= std::log(alpha)) return Decision::Reject;
  if (labels_remaining <= 0) return Decision::Retain;
  return Decision::Continue;
}

}  // namespace seqtest
