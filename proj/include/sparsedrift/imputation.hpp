#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparsedrift/masked_matrix.hpp"
#include "sparsedrift/missingness.hpp"
#include "sparsedrift/streamgen.hpp"

namespace sparsedrift {

/// Declaration order is the tie-breaking order of imputer selection.
enum class ImputerKind { mean, median, mode, zero, knn };

struct ImputationMethod {
  ImputerKind kind = ImputerKind::mean;
  /// Neighbour count; only meaningful for knn.
  std::size_t k = 0;

  static ImputationMethod mean() { return {ImputerKind::mean, 0}; }
  static ImputationMethod median() { return {ImputerKind::median, 0}; }
  static ImputationMethod mode() { return {ImputerKind::mode, 0}; }
  static ImputationMethod zero() { return {ImputerKind::zero, 0}; }
  static ImputationMethod knn(std::size_t k) { return {ImputerKind::knn, k}; }

  /// "mean", "median", "mode", "zero", "knn(5)".
  std::string name() const;
  auto operator<=>(const ImputationMethod&) const = default;
};

/// Accepts "mean", "median", "mode", "zero", "knn:K" and "knn(K)".
ImputationMethod parse_imputation_method(std::string_view text);

struct ImputationOutcome {
  MaskedMatrix data;
  /// knn cells that had no candidate neighbour and took the column mean.
  std::size_t fallback_cells = 0;
};

/// Fill every missing cell; observed cells are copied bit for bit.
///
/// knn ranks rows observed at the target feature by the mean squared
/// difference over co-observed features and fills with the mean of the k
/// nearest, lowest row index first among equal distances. Rows that share no
/// observed feature with the target row are not candidates.
ImputationOutcome impute(const MaskedMatrix& data, const ImputationMethod& method);

struct FamilyScore {
  DistributionFamily family = DistributionFamily::normal;
  DistributionSpec fitted;
  /// One-sample KS distance to the fitted CDF; 1 when the family cannot be fitted.
  double ks_distance = 1.0;
};

struct DistributionFit {
  DistributionSpec fitted;
  double fit_statistic = 1.0;
  /// All candidate families, best first.
  std::vector<FamilyScore> ranking;
  bool low_confidence = false;

  DistributionFamily family() const { return family_of(fitted); }
};

/// Pick the univariate family whose moment-fitted CDF is closest (KS) to the sample.
DistributionFit identify_distribution(std::span<const double> column);

/// Best imputer per distribution family and missingness mechanism.
/// Throws ConfigError for a family without a tabulated default.
ImputationMethod default_method_for(DistributionFamily family, Mechanism mechanism, double rate);

struct CandidateScore {
  ImputationMethod method;
  double rmse = 0.0;
};

struct SelectionReport {
  /// In tie-breaking order.
  std::vector<CandidateScore> candidates;
  ImputationMethod winner;
  std::size_t masked_cells = 0;
  std::size_t complete_rows = 0;
  /// True when selection could not run and a tabulated default was used instead.
  bool used_default = false;
};

/// Root-mean-square difference over the cells selected by `selected` (nonzero = use).
double rmse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& imputed,
            const ObservedMask& selected);

/// Re-create the observed missingness on the complete rows and rank candidates
/// by RMSE against the known truth.
///
/// Each incomplete feature gets its classified mechanism at its measured
/// sparsity; MAR uses as driver the other feature whose values correlate most
/// strongly with the feature's mask. Throws SelectionError with fewer than
/// `min_complete_rows` complete rows.
SelectionReport select_best_imputer(const MaskedMatrix& data, const MissingnessVerdict& verdict,
                                    std::span<const ImputationMethod> candidates,
                                    std::uint64_t seed, std::size_t min_complete_rows = 50);

}  // namespace sparsedrift
