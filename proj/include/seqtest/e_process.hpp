#pragma once

#include <cstdint>

namespace seqtest {

// Running state of the sequential likelihood-ratio statistic, kept in log domain.
// log_w is recomputed from (k, n) at every step because the maximizing class
// prior k/n changes with n; only the denominator accumulates incrementally.
struct EProcessState {
  int n = 0;                    // observations pushed so far
  int k = 0;                    // count of observed z == 1
  double log_denominator = 0.0; // sum of log Q_i(z_i | s_i), always <= 0
  double log_w = 0.0;           // current log statistic; defined for n >= 1
};

enum class Decision { Reject, Retain, Continue };

struct Verdict {
  Decision decision = Decision::Continue;
  int stopping_step = -1;  // post-initialization step at which the run became terminal
};

// Log-likelihood of a binary sequence with k ones out of n under the Bernoulli
// prior that maximizes it (rate k/n):  k*log(k/n) + (n-k)*log((n-k)/n), with
// the 0*log 0 = 0 convention. Throws std::domain_error for n < 1 or k outside [0, n].
double log_prior_numerator(int k, int n);

// Fold one observation into the statistic. q_z is the predicted probability of
// the *observed* label and must already be clipped into (0, 1); values at or
// beyond the endpoints signal missing clipping upstream and throw.
EProcessState push_observation(const EProcessState& state, int z, double q_z);

// Reject iff log_w <= log(alpha); Retain iff the budget is exhausted without
// rejection; Continue otherwise. alpha outside (0, 1) throws.
Decision decide(const EProcessState& state, double alpha, int labels_remaining);

}  // namespace seqtest
