#include "sparsedrift/missingness.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/stats.hpp"

namespace sparsedrift {

RunsTestResult runs_test(std::span<const std::uint8_t> sequence) {
  RunsTestResult r;
  const std::size_t n = sequence.size();
  for (auto s : sequence) (s != 0 ? r.n_observed : r.n_missing) += 1;
  r.short_sequence = n < 20;
  if (n > 0) {
    r.runs = 1;
    for (std::size_t i = 1; i < n; ++i)
      if ((sequence[i] != 0) != (sequence[i - 1] != 0)) ++r.runs;
  }
  if (n < 2 || r.n_observed == 0 || r.n_missing == 0) {
    r.degenerate = true;
    return r;
  }
  const double n1 = static_cast<double>(r.n_observed);
  const double n0 = static_cast<double>(r.n_missing);
  const double nn = static_cast<double>(n);
  const double prod = 2.0 * n1 * n0;
  r.expected_runs = prod / nn + 1.0;
  r.variance = prod * (prod - nn) / (nn * nn * (nn - 1.0));
  if (!(r.variance > 0.0)) {
    r.degenerate = true;
    return r;
  }
  r.z = (static_cast<double>(r.runs) - r.expected_runs) / std::sqrt(r.variance);
  r.p_value = stats::two_sided_normal_p(*r.z);
  return r;
}

namespace {

bool mask_uncorrelated(const MaskedMatrix& data, Eigen::Index j, double alpha) {
  for (Eigen::Index k = 0; k < data.cols(); ++k) {
    if (k == j) continue;
    std::vector<double> indicator;
    std::vector<double> values;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (!data.observed(i, k)) continue;
      indicator.push_back(data.observed(i, j) ? 1.0 : 0.0);
      values.push_back(data(i, k));
    }
    const auto r = stats::pearson(indicator, values);
    if (!r) continue;
    if (stats::correlation_p_value(*r, values.size()) < alpha) return false;
  }
  return true;
}

}  // namespace

MissingnessVerdict classify_missingness(const MaskedMatrix& data, double alpha, bool allow_mcar) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("classify_missingness: alpha must be in (0,1)");
  MissingnessVerdict verdict;
  std::vector<std::uint8_t> column(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    FeatureVerdict fv;
    fv.feature = j;
    fv.sparsity = data.sparsity(j);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      column[static_cast<std::size_t>(i)] = data.mask()(i, j);
    fv.evidence = runs_test(column);
    if (fv.sparsity > 0.0) {
      const bool random = !fv.evidence.p_value || *fv.evidence.p_value >= alpha;
      if (!random) {
        fv.mechanism = Mechanism::mar;
      } else if (allow_mcar) {
        fv.uncorrelated_with_observed = mask_uncorrelated(data, j, alpha);
        fv.mechanism = *fv.uncorrelated_with_observed ? Mechanism::mcar : Mechanism::mnar;
      } else {
        fv.mechanism = Mechanism::mnar;
      }
    }
    verdict.features.push_back(std::move(fv));
  }
  return verdict;
}

ImputationBiasReport imputation_bias_report(const MaskedMatrix& observed,
                                            const MaskedMatrix& imputed) {
  if (observed.rows() != imputed.rows() || observed.cols() != imputed.cols())
    throw SpecError("bias report: shape mismatch");
  if (!imputed.complete()) throw InputError("bias report: imputed matrix has missing cells");
  ImputationBiasReport report;
  const double n = static_cast<double>(observed.rows());
  for (Eigen::Index j = 0; j < observed.cols(); ++j) {
    FeatureBias fb;
    fb.feature = j;
    const auto obs = observed.observed_column(j);
    std::vector<double> fill;
    for (Eigen::Index i = 0; i < observed.rows(); ++i)
      if (!observed.observed(i, j)) fill.push_back(imputed(i, j));
    fb.w1 = static_cast<double>(obs.size()) / n;
    fb.w2 = static_cast<double>(fill.size()) / n;
    if (obs.empty()) {
      fb.e2_hat = stats::mean(fill);
    } else {
      const double e1 = stats::mean(obs);
      fb.e1_hat = e1;
      // w1 * e1 + w2 * mean(fill) written as e1 + w2 * mean(fill - e1), so an
      // imputation that reproduces e1 leaves e2 bit-identical to e1.
      double shift = 0.0;
      if (!fill.empty()) {
        for (double v : fill) shift += v - e1;
        shift /= static_cast<double>(fill.size());
      }
      fb.e2_hat = e1 + fb.w2 * shift;
      fb.bias = fb.e2_hat - e1;
    }
    report.features.push_back(fb);
  }
  return report;
}

}  // namespace sparsedrift
