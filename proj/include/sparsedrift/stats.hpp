#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sparsedrift::stats {

double mean(std::span<const double> xs);
/// Population variance (divides by n).
double variance(std::span<const double> xs);
double median(std::vector<double> xs);
/// Linear-interpolated quantile, q in [0,1].
double quantile(std::vector<double> xs, double q);
/// Center of the most populated of `bins` equal-width bins over [min, max];
/// the lowest bin wins ties.
double histogram_mode(std::span<const double> xs, int bins = 32);

/// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
/// Two-sided p-value of H0: rho = 0 from the t statistic with n - 2 dof.
double correlation_p_value(double r, std::size_t n);

double normal_cdf(double z);
double two_sided_normal_p(double z);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);
/// Two-sample KS statistic sup |F_a - F_b|; ties handled exactly.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic two-sample p-value with the small-sample correction
/// lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D, ne = n m / (n + m).
double ks_two_sample_p_value(double d, std::size_t n, std::size_t m);
/// One-sample KS distance between the empirical CDF of `xs` and `cdf`.
/// For a discrete `cdf` the left limits are taken at each distinct sample value.
double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf,
                     bool discrete = false);

}  // namespace sparsedrift::stats
