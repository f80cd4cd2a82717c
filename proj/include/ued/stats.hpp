#ifndef UED_STATS_HPP
#define UED_STATS_HPP

#include <span>
#include <vector>

namespace ued::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

// Spearman rank correlation (average ranks for ties); two-sided p-value
// from the t approximation.
TestResult spearman(std::span<const double> x, std::span<const double> y);

// Two-sample Kolmogorov-Smirnov; asymptotic p-value.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Pearson chi-square goodness of fit. Adjacent bins are merged until each
// expected count is at least `min_expected`.
TestResult chi_square_gof(std::span<const double> observed, std::span<const double> probs,
                          double min_expected = 5.0);

double beta_binomial_pmf(int k, int n, double alpha, double beta);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // sample variance (n-1)

}  // namespace ued::stats

#endif  // UED_STATS_HPP
