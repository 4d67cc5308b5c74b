#pragma once

namespace seqtest {

// Binary entropy in nats; endpoints evaluate to 0 (0*log 0 = 0).
double binary_entropy(double p);

// Standard normal CDF.
double normal_cdf(double x);

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction,
// |error| < 1e-8 over the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided Student-t tail probability P(|T_df| >= |t|).
double student_t_two_sided_p(double t, double df);

}  // namespace seqtest
