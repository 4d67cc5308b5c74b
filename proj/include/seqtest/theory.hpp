#pragma once

#include <span>
#include <vector>

namespace seqtest {

// Finite-support feature distribution described by the class-0 posterior at each
// support point and a probability mass per point. All expectations over it are
// exact enumerations, nothing is sampled.
struct DiscreteScenario {
  std::vector<double> cells;    // P(Z=0 | s_i) per support point
  std::vector<double> weights;  // mass G(s_i), non-negative, sums to 1

  void validate() const;        // throws std::invalid_argument on violation
  double prior0() const;        // P(Z=0) = sum_i weights[i] * cells[i]
  double mutual_information() const;  // nats
};

struct PowerBoundInputs {
  double alpha = 0.05;
  double nq = 0.0;     // label budget entering the bound
  double mi = 0.0;     // I(S;Z) in nats
  double delta = 0.0;  // max conditional-MI gain over the partition
  double eps1 = 0.0;   // max KL^2(q||p | A)
  double eps2 = 0.0;   // max KL^2(p||q | A)
  double sigma = 0.0;  // relative-entropy-variance bound (std deviation scale)
};

enum class PowerBoundKind { Proposed, Baseline };

enum class KlDirection { QFromP, PFromQ };

// Plug-in estimate of I(S;Z | A): binary entropy of the cell prior minus the
// average predictive entropy over the cell's unlabeled members. Negative values
// are allowed (misspecified Q); the estimate is only ever used through argmax.
double estimate_conditional_mi(double cell_prior, std::span<const double> q_values);

// Expected squared log-ratio between the model joint q(s,z)=Q(z|s)p(s) and the
// true joint p(s,z)=P(z|s)p(s). QFromP averages log^2(Q/P) under p; PFromQ
// averages log^2(P/Q) under q. Posteriors are class-0 probabilities per point.
double kl_squared(KlDirection direction,
                  std::span<const double> true_posteriors,
                  std::span<const double> model_posteriors,
                  std::span<const double> weights);

// KL(P(z|s) || Q(z|s)) averaged over the point weights, in nats.
double kl_posterior_divergence(std::span<const double> true_posteriors,
                               std::span<const double> model_posteriors,
                               std::span<const double> weights);

// Variance under p(s,z) of the information density log(P(z|s)/P(z)). Its mean
// is exactly I(S;Z) when prior0 is consistent with posteriors and weights.
double relative_entropy_variance(double prior0,
                                 std::span<const double> posteriors,
                                 std::span<const double> weights);

// Normal-approximation lower bounds on testing power for the partition example
// and the random-query baseline. Throws on a degenerate zero denominator.
double power_lower_bound(PowerBoundKind kind, const PowerBoundInputs& inputs);

struct LpSolution {
  DiscreteScenario scenario;  // input cells with the optimal weights
  double max_mi = 0.0;
  bool degenerate = false;    // all posteriors equal: MI is 0 for every feasible mass
};

// Maximizes MI over masses with fixed class prior u: minimizes the expected
// conditional entropy subject to sum_i P(Z=0|s_i) G_i = u, sum G = 1, G >= 0.
// Solved exactly by enumerating the feasible polytope's vertices (at most two
// support points each). Throws std::domain_error when u is infeasible.
LpSolution mi_max_lp(std::span<const double> cells, double u);

// Closed-form optimum of the same program: all mass on the extreme posteriors,
// weights (u - P1)/(P0 - P1) and (P0 - u)/(P0 - P1); lowest index on ties.
LpSolution bimodal_closed_form(std::span<const double> cells, double u);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Plain-text scenario file: lines of "posterior weight" pairs plus key/value
// settings (u, alpha, nq, delta, eps1, eps2, sigma, q). '#' starts a comment;
// '=' between key and value is optional.
struct TheoryScenarioFile {
  DiscreteScenario scenario;
  double u = 0.0;  // target prior for the LP; defaults to the scenario's own prior
  double alpha = 0.05;
  double nq = 0.0;  // 0: no power-bound evaluation requested
  double delta = 0.0;
  double eps1 = -1.0;  // negative: derive from q when present, else 0
  double eps2 = -1.0;
  double sigma = -1.0;  // negative: derive from the scenario's relative entropy variance
  std::vector<double> model_posteriors;  // optional Q(Z=0|s) per point
};

TheoryScenarioFile load_theory_scenario(const std::string& path);

// Welch unequal-variance t-test with Welch-Satterthwaite degrees of freedom,
// two-sided p-value. Requires both samples of size >= 2 and positive variance
// in at least one of them.
TTestResult welch_t_test(std::span<const double> sample_a, std::span<const double> sample_b);

}  // namespace seqtest
