#pragma once

#include <cstddef>
#include <span>

namespace driftlab {

double mean_of(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased, n-1

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction;
/// absolute error well below 1e-10 over the arguments used here.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

/// Welch (unequal variance) two-sided t-test. Degenerate inputs with zero
/// pooled variance give p = 1 when the means match and p = 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace driftlab
