#include "seqtest/theory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "seqtest/special_functions.hpp"

namespace seqtest {

namespace {

constexpr double kFeasTol = 1e-12;

void check_distribution(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("weights must be non-negative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
}

}  // namespace

void DiscreteScenario::validate() const {
  if (cells.size() < 2)
    throw std::invalid_argument("DiscreteScenario: need at least two support points");
  if (cells.size() != weights.size())
    throw std::invalid_argument("DiscreteScenario: cells/weights size mismatch");
  for (double c : cells)
    if (!(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("DiscreteScenario: posterior outside [0, 1]");
  check_distribution(weights);
}

double DiscreteScenario::prior0() const {
  double u = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) u += weights[i] * cells[i];
  return u;
}

double DiscreteScenario::mutual_information() const {
  double conditional = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    conditional += weights[i] * binary_entropy(cells[i]);
  return binary_entropy(prior0()) - conditional;
}

double estimate_conditional_mi(double cell_prior, std::span<const double> q_values) {
  if (!(cell_prior >= 0.0 && cell_prior <= 1.0))
    throw std::invalid_argument("estimate_conditional_mi: cell prior outside [0, 1]");
  if (q_values.empty())
    throw std::invalid_argument("estimate_conditional_mi: no unlabeled members in cell");
  double mean_predictive_entropy = 0.0;
  for (double q : q_values) {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("estimate_conditional_mi: q value outside (0, 1)");
    mean_predictive_entropy += binary_entropy(q);
  }
  mean_predictive_entropy /= static_cast<double>(q_values.size());
  return binary_entropy(cell_prior) - mean_predictive_entropy;
}

namespace {

// Adds w * m(z) * log^2(a(z)/b(z)) over z in {0,1} for one support point, where the
// mass m and the ratio orientation depend on the direction. Guards infinite ratios
// that carry positive mass.
double squared_log_ratio_term(double mass_z, double num_z, double den_z) {
  if (mass_z == 0.0) return 0.0;
  if (num_z <= 0.0 || den_z <= 0.0)
    throw std::domain_error("kl_squared: zero posterior with disagreeing counterpart");
  const double r = std::log(num_z / den_z);
  return mass_z * r * r;
}

}  // namespace

double kl_squared(KlDirection direction,
                  std::span<const double> true_posteriors,
                  std::span<const double> model_posteriors,
                  std::span<const double> weights) {
  if (true_posteriors.size() != model_posteriors.size() ||
      true_posteriors.size() != weights.size())
    throw std::invalid_argument("kl_squared: size mismatch");
  check_distribution(weights);
  double out = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double p0 = true_posteriors[i], p1 = 1.0 - true_posteriors[i];
    const double q0 = model_posteriors[i], q1 = 1.0 - model_posteriors[i];
    if (direction == KlDirection::QFromP) {
      out += weights[i] * (squared_log_ratio_term(p0, q0, p0) +
                           squared_log_ratio_term(p1, q1, p1));
    } else {
      out += weights[i] * (squared_log_ratio_term(q0, p0, q0) +
                           squared_log_ratio_term(q1, p1, q1));
    }
  }
  return out;
}

double kl_posterior_divergence(std::span<const double> true_posteriors,
                               std::span<const double> model_posteriors,
                               std::span<const double> weights) {
  if (true_posteriors.size() != model_posteriors.size() ||
      true_posteriors.size() != weights.size())
    throw std::invalid_argument("kl_posterior_divergence: size mismatch");
  check_distribution(weights);
  double out = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double p0 = true_posteriors[i], p1 = 1.0 - true_posteriors[i];
    const double q0 = model_posteriors[i], q1 = 1.0 - model_posteriors[i];
    for (auto [p, q] : {std::pair{p0, q0}, std::pair{p1, q1}}) {
      if (p == 0.0) continue;
      if (q <= 0.0)
        throw std::domain_error("kl_posterior_divergence: infinite divergence");
      out += weights[i] * p * std::log(p / q);
    }
  }
  return out;
}

double relative_entropy_variance(double prior0,
                                 std::span<const double> posteriors,
                                 std::span<const double> weights) {
  if (posteriors.size() != weights.size())
    throw std::invalid_argument("relative_entropy_variance: size mismatch");
  if (!(prior0 >= 0.0 && prior0 <= 1.0))
    throw std::invalid_argument("relative_entropy_variance: prior outside [0, 1]");
  check_distribution(weights);
  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double post[2] = {posteriors[i], 1.0 - posteriors[i]};
    const double prior[2] = {prior0, 1.0 - prior0};
    for (int z = 0; z < 2; ++z) {
      const double mass = weights[i] * post[z];
      if (mass == 0.0) continue;
      if (prior[z] <= 0.0)
        throw std::domain_error("relative_entropy_variance: zero prior with positive posterior mass");
      const double density = std::log(post[z] / prior[z]);
      mean += mass * density;
      second += mass * density * density;
    }
  }
  return second - mean * mean;
}

double power_lower_bound(PowerBoundKind kind, const PowerBoundInputs& in) {
  if (!(in.alpha > 0.0 && in.alpha < 1.0))
    throw std::invalid_argument("power_lower_bound: alpha must lie in (0, 1)");
  if (!(in.nq > 0.0))
    throw std::invalid_argument("power_lower_bound: budget must be positive");
  if (in.eps1 < 0.0 || in.eps2 < 0.0 || in.sigma < 0.0 || in.delta < 0.0)
    throw std::invalid_argument("power_lower_bound: negative dispersion or gain input");
  const double variance = in.eps1 + in.sigma * in.sigma + 2.0 * in.sigma * std::sqrt(in.eps1);
  if (!(variance > 0.0))
    throw std::domain_error("power_lower_bound: degenerate zero denominator");
  const double drift = kind == PowerBoundKind::Proposed
                           ? in.mi + in.delta - 2.0 * std::sqrt(in.eps1) - std::sqrt(in.eps2)
                           : in.mi - std::sqrt(in.eps1);
  const double root_nq = std::sqrt(in.nq);
  return normal_cdf((std::log(in.alpha) / root_nq + root_nq * drift) / std::sqrt(variance));
}

namespace {

void check_cells(std::span<const double> cells) {
  if (cells.size() < 2)
    throw std::invalid_argument("need at least two posterior cells");
  for (double c : cells)
    if (!(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("posterior cell outside [0, 1]");
}

LpSolution make_solution(std::span<const double> cells, std::vector<double> weights,
                         double u, bool degenerate) {
  LpSolution out;
  out.scenario.cells.assign(cells.begin(), cells.end());
  out.scenario.weights = std::move(weights);
  out.degenerate = degenerate;
  double conditional = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    conditional += out.scenario.weights[i] * binary_entropy(cells[i]);
  out.max_mi = degenerate ? 0.0 : binary_entropy(u) - conditional;
  return out;
}

}  // namespace

LpSolution mi_max_lp(std::span<const double> cells, double u) {
  check_cells(cells);
  const std::size_t n = cells.size();
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> best(n, 0.0);
  bool feasible = false;

  // Vertices with a single support point: the prior constraint pins the cell.
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(cells[i] - u) > kFeasTol) continue;
    const double objective = binary_entropy(cells[i]);
    if (!feasible || objective < best_objective) {
      feasible = true;
      best_objective = objective;
      std::fill(best.begin(), best.end(), 0.0);
      best[i] = 1.0;
    }
  }

  // Vertices with two support points: the 2x2 system has a unique solution.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = cells[i] - cells[j];
      if (gap == 0.0) continue;
      const double wi = (u - cells[j]) / gap;
      const double wj = 1.0 - wi;
      if (wi < -kFeasTol || wj < -kFeasTol) continue;
      const double ci = std::clamp(wi, 0.0, 1.0);
      const double cj = 1.0 - ci;
      const double objective = ci * binary_entropy(cells[i]) + cj * binary_entropy(cells[j]);
      if (!feasible || objective < best_objective) {
        feasible = true;
        best_objective = objective;
        std::fill(best.begin(), best.end(), 0.0);
        best[i] = ci;
        best[j] = cj;
      }
    }
  }

  if (!feasible)
    throw std::domain_error("mi_max_lp: prior u infeasible for the given cells");
  return make_solution(cells, std::move(best), u, false);
}

LpSolution bimodal_closed_form(std::span<const double> cells, double u) {
  check_cells(cells);
  const std::size_t n = cells.size();
  std::size_t idx_hi = 0, idx_lo = 0;  // class-0 and class-1 modes; lowest index wins ties
  for (std::size_t i = 1; i < n; ++i) {
    if (cells[i] > cells[idx_hi]) idx_hi = i;
    if (cells[i] < cells[idx_lo]) idx_lo = i;
  }
  const double p_hi = cells[idx_hi];
  const double p_lo = cells[idx_lo];
  std::vector<double> weights(n, 0.0);
  if (p_hi == p_lo) {
    weights[0] = 0.5;
    weights[1] = 0.5;
    return make_solution(cells, std::move(weights), u, true);
  }
  if (u < p_lo - kFeasTol || u > p_hi + kFeasTol)
    throw std::domain_error("bimodal_closed_form: prior u outside the posterior range");
  const double w_hi = std::clamp((u - p_lo) / (p_hi - p_lo), 0.0, 1.0);
  weights[idx_hi] = w_hi;
  weights[idx_lo] = 1.0 - w_hi;
  return make_solution(cells, std::move(weights), u, false);
}

TheoryScenarioFile load_theory_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  TheoryScenarioFile out;
  bool u_given = false;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& message) -> void {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;

    double maybe_posterior = 0.0;
    const auto [ptr, ec] =
        std::from_chars(first.data(), first.data() + first.size(), maybe_posterior);
    if (ec == std::errc{} && ptr == first.data() + first.size()) {
      double weight = 0.0;
      if (!(tokens >> weight)) fail("expected 'posterior weight'");
      out.scenario.cells.push_back(maybe_posterior);
      out.scenario.weights.push_back(weight);
      continue;
    }

    if (first == "q") {
      double value = 0.0;
      while (tokens >> value) out.model_posteriors.push_back(value);
      if (out.model_posteriors.empty()) fail("q line carries no values");
      continue;
    }
    double value = 0.0;
    if (!(tokens >> value)) fail("expected a value after '" + first + "'");
    if (first == "u") {
      out.u = value;
      u_given = true;
    } else if (first == "alpha") {
      out.alpha = value;
    } else if (first == "nq") {
      out.nq = value;
    } else if (first == "delta") {
      out.delta = value;
    } else if (first == "eps1") {
      out.eps1 = value;
    } else if (first == "eps2") {
      out.eps2 = value;
    } else if (first == "sigma") {
      out.sigma = value;
    } else {
      fail("unknown key '" + first + "'");
    }
  }
  out.scenario.validate();
  if (!u_given) out.u = out.scenario.prior0();
  if (!out.model_posteriors.empty() &&
      out.model_posteriors.size() != out.scenario.cells.size())
    throw std::runtime_error(path + ": q needs one value per support point");
  return out;
}

TTestResult welch_t_test(std::span<const double> sample_a, std::span<const double> sample_b) {
  const std::size_t na = sample_a.size(), nb = sample_b.size();
  if (na < 2 || nb < 2)
    throw std::invalid_argument("welch_t_test: both samples need at least two values");
  auto mean_var = [](std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / static_cast<double>(x.size() - 1)};
  };
  const auto [ma, va] = mean_var(sample_a);
  const auto [mb, vb] = mean_var(sample_b);
  if (va <= 0.0 && vb <= 0.0)
    throw std::invalid_argument("welch_t_test: both samples are degenerate (zero variance)");
  const double sa = va / static_cast<double>(na);
  const double sb = vb / static_cast<double>(nb);
  TTestResult out;
  out.t = (ma - mb) / std::sqrt(sa + sb);
  out.df = (sa + sb) * (sa + sb) /
           (sa * sa / static_cast<double>(na - 1) + sb * sb / static_cast<double>(nb - 1));
  out.p = student_t_two_sided_p(out.t, out.df);
  return out;
}

}  // namespace seqtest
