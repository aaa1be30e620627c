#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsedrift/masked_matrix.hpp"
#include "sparsedrift/types.hpp"

namespace sparsedrift {

/// Wald-Wolfowitz runs test on a binary sequence (1 = observed, 0 = missing).
struct RunsTestResult {
  std::size_t runs = 0;
  std::size_t n_observed = 0;
  std::size_t n_missing = 0;
  double expected_runs = 0.0;
  double variance = 0.0;
  /// Absent when the test is inapplicable (single symbol or zero variance).
  std::optional<double> z;
  std::optional<double> p_value;
  bool degenerate = false;
  /// Normal approximation is unreliable below 20 symbols.
  bool short_sequence = false;
};

RunsTestResult runs_test(std::span<const std::uint8_t> sequence);

struct FeatureVerdict {
  Eigen::Index feature = 0;
  double sparsity = 0.0;
  /// Empty for complete features (sparsity 0).
  std::optional<Mechanism> mechanism;
  RunsTestResult evidence;
  /// Only evaluated when MCAR is allowed and randomness is not rejected.
  std::optional<bool> uncorrelated_with_observed;
};

struct MissingnessVerdict {
  std::vector<FeatureVerdict> features;

  const FeatureVerdict& feature(Eigen::Index j) const {
    return features.at(static_cast<std::size_t>(j));
  }
};

/// Per-feature mechanism from the runs test on the mask in row order.
///
/// Randomness rejected (p < alpha) gives MAR. Otherwise the feature is MNAR,
/// unless `allow_mcar` is set and the mask is uncorrelated (point-biserial,
/// level alpha) with every other feature on its observed rows, which gives MCAR.
MissingnessVerdict classify_missingness(const MaskedMatrix& data, double alpha,
                                        bool allow_mcar = false);

struct FeatureBias {
  Eigen::Index feature = 0;
  /// Mean over observed cells; absent for a fully missing feature.
  std::optional<double> e1_hat;
  /// Mean after imputation, w1 * E[observed] + w2 * E[imputed on missing].
  double e2_hat = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  std::optional<double> bias;
};

struct ImputationBiasReport {
  std::vector<FeatureBias> features;
};

/// Expectation shift introduced by imputation, under the empirical uniform
/// weighting of rows.
ImputationBiasReport imputation_bias_report(const MaskedMatrix& observed,
                                            const MaskedMatrix& imputed);

}  // namespace sparsedrift
