#pragma once

#include <cstdint>
#include <vector>

namespace zeroone {

/// Binomial standard error sqrt(p(1-p)/trials).
double stderr_bernoulli(double p_hat, std::uint64_t trials);

/// Combined standard error of a difference of independent estimates.
double combined_stderr(double se1, double se2);

/// Pearson statistic of observed counts against the uniform distribution.
double chi_square_uniform_stat(const std::vector<std::uint64_t>& counts);

/// Upper-tail p-value of the chi-square distribution with `dof` degrees of freedom.
double chi_square_pvalue(double stat, int dof);

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

}  // namespace zeroone
