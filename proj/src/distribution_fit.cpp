#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/imputation.hpp"
#include "sparsedrift/stats.hpp"

namespace sparsedrift {

namespace {

constexpr std::size_t kMinConfidentSample = 30;

FamilyScore fit_normal(const std::vector<double>& xs, double mu, double sd) {
  FamilyScore s{DistributionFamily::normal, Normal{mu, sd}, 1.0};
  if (!(sd > 0.0)) return s;
  s.ks_distance = stats::ks_one_sample(xs, [&](double x) { return stats::normal_cdf((x - mu) / sd); });
  return s;
}

FamilyScore fit_uniform(const std::vector<double>& xs, double mu, double sd) {
  const double half = std::sqrt(3.0) * sd;
  FamilyScore s{DistributionFamily::uniform, Uniform{mu - half, mu + half}, 1.0};
  if (!(sd > 0.0)) return s;
  const double lo = mu - half;
  const double hi = mu + half;
  s.ks_distance = stats::ks_one_sample(xs, [&](double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); });
  return s;
}

FamilyScore fit_chi_squared(const std::vector<double>& xs, double mu) {
  FamilyScore s{DistributionFamily::chi_squared, ChiSquared{std::max(mu, 1.0)}, 1.0};
  if (!(mu >= 1.0) || *std::min_element(xs.begin(), xs.end()) < 0.0) return s;
  const boost::math::chi_squared dist(mu);
  s.ks_distance = stats::ks_one_sample(xs, [&](double x) { return x <= 0.0 ? 0.0 : boost::math::cdf(dist, x); });
  return s;
}

FamilyScore fit_cauchy(const std::vector<double>& xs) {
  const double location = stats::median(xs);
  const double scale = 0.5 * (stats::quantile(xs, 0.75) - stats::quantile(xs, 0.25));
  FamilyScore s{DistributionFamily::cauchy, Cauchy{location, scale > 0.0 ? scale : 1.0}, 1.0};
  if (!(scale > 0.0)) return s;
  s.ks_distance = stats::ks_one_sample(
      xs, [&](double x) { return 0.5 + std::atan((x - location) / scale) / std::numbers::pi; });
  return s;
}

FamilyScore fit_binomial(const std::vector<double>& xs, double mu, double var) {
  FamilyScore s{DistributionFamily::binomial, Binomial{1, 0.5}, 1.0};
  const bool counts = std::all_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0 && x == std::floor(x); });
  if (!counts || !(mu > 0.0)) return s;
  const double p_moment = 1.0 - var / mu;
  if (!(p_moment > 0.0)) return s;
  const double max_value = *std::max_element(xs.begin(), xs.end());
  const auto trials = static_cast<std::uint64_t>(std::max(std::round(mu / p_moment), max_value));
  if (trials < 1) return s;
  const double p = std::clamp(mu / static_cast<double>(trials), 0.0, 1.0);
  s.fitted = Binomial{trials, p};
  const boost::math::binomial dist(static_cast<double>(trials), p);
  s.ks_distance = stats::ks_one_sample(
      xs,
      [&](double x) {
        if (x < 0.0) return 0.0;
        if (x >= static_cast<double>(trials)) return 1.0;
        return boost::math::cdf(dist, std::floor(x));
      },
      /*discrete=*/true);
  return s;
}

}  // namespace

DistributionFit identify_distribution(std::span<const double> column) {
  if (column.empty()) throw ParameterError("identify_distribution: no observed values");
  std::vector<double> xs(column.begin(), column.end());
  const double mu = stats::mean(xs);
  const double var = stats::variance(xs);
  const double sd = std::sqrt(var * static_cast<double>(xs.size()) /
                              static_cast<double>(std::max<std::size_t>(xs.size() - 1, 1)));

  DistributionFit fit;
  fit.ranking = {fit_normal(xs, mu, sd), fit_uniform(xs, mu, sd), fit_chi_squared(xs, mu),
                 fit_cauchy(xs), fit_binomial(xs, mu, var)};
  std::stable_sort(fit.ranking.begin(), fit.ranking.end(),
                   [](const FamilyScore& a, const FamilyScore& b) { return a.ks_distance < b.ks_distance; });
  fit.fitted = fit.ranking.front().fitted;
  fit.fit_statistic = fit.ranking.front().ks_distance;
  fit.low_confidence = xs.size() < kMinConfidentSample;
  return fit;
}

}  // namespace sparsedrift
