#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsedrift/detectors.hpp"

namespace sparsedrift {

enum class EnsemblePreset { abrupt, gradual, custom };

std::string to_string(EnsemblePreset preset);
EnsemblePreset parse_ensemble_preset(std::string_view text);

struct EnsembleConfig {
  std::vector<DetectorKind> members;
  /// Trailing window, in instances, within which a member firing counts as a vote.
  std::size_t window = 2000;
  double threshold = 0.0;
  DetectorConfig detectors;

  /// ADWIN + HDDM_A + KSWIN.
  static EnsembleConfig abrupt(std::size_t window = 2000);
  /// HDDM_A + HDDM_W + Page-Hinkley.
  static EnsembleConfig gradual(std::size_t window = 2000);
  static EnsembleConfig preset(EnsemblePreset preset, std::size_t window = 2000);

  /// Throws ConfigError unless N >= 2, W >= 1 and t in [0,1].
  void validate() const;
};

/// Mean of +/-1 votes.
double ensemble_score(std::span<const int> votes);

enum class Decision { negative, reject, positive };

std::string to_string(Decision decision);

/// -1 when phi <= -t, +1 when phi >= t, reject in between.
Decision decide(double phi, double t);

/// Votes needed for an ensemble drift: ceil((N + 1) / 2).
std::size_t quorum(std::size_t members);

struct EnsembleOutput {
  std::size_t index = 0;
  double score = -1.0;
  /// Bit m set when member m has an unexpired firing.
  std::uint32_t active = 0;
  Decision decision = Decision::negative;
  bool drift = false;
};

/// Majority vote over trailing-window member firings. An ensemble drift at d
/// clears every recorded firing and ignores member firings before d + W, so
/// one cluster of member drifts yields one ensemble drift.
class VoteWindow {
 public:
  VoteWindow(std::size_t members, std::size_t window, double threshold = 0.0);

  /// Outputs of all members for one instance, in member order.
  EnsembleOutput update(std::span<const DetectorOutput> outputs);
  void reset();

  const std::vector<std::optional<std::size_t>>& firings() const { return firings_; }

 private:
  std::size_t window_;
  double threshold_;
  std::vector<std::optional<std::size_t>> firings_;
  std::optional<std::size_t> last_index_;
  std::size_t suppressed_until_ = 0;
};

/// Runs the member detectors on the same scalar stream and votes.
class EnsembleDetector final : public DriftDetector {
 public:
  explicit EnsembleDetector(const EnsembleConfig& config);
  EnsembleDetector(const EnsembleDetector& other);
  EnsembleDetector& operator=(const EnsembleDetector&) = delete;

  const EnsembleConfig& config() const { return config_; }
  const EnsembleOutput& last_output() const { return last_; }
  /// Member outputs for the most recent instance.
  const std::vector<DetectorOutput>& member_outputs() const { return member_outputs_; }
  const DriftDetector& member(std::size_t m) const { return *members_.at(m); }
  std::size_t member_count() const { return members_.size(); }

  std::string_view name() const override { return "ensemble"; }
  std::unique_ptr<DriftDetector> clone() const override;

 protected:
  Signal step(double x) override;
  void reset_state() override;

 private:
  EnsembleConfig config_;
  std::vector<std::unique_ptr<DriftDetector>> members_;
  VoteWindow votes_;
  std::vector<DetectorOutput> member_outputs_;
  EnsembleOutput last_;
};

struct RiskParams {
  double mu_z = 0.0;
  double rho_bar = 1.0;
  double c1 = 1.0;
  double c2 = 0.0;
  double t = 0.0;
};

struct RiskBound {
  double value = 0.0;
  /// rho_bar = 0: the bound degenerates and 0 is its limiting value.
  bool limiting = false;
};

/// Upper bound on the ensemble risk from the mean margin and the average
/// pairwise member correlation:
///   (c1 - c2) / (1 + (mu+t)^2 / (rho (1-mu^2))) + c2 / (1 + (mu-t)^2 / (rho (1-mu^2))).
RiskBound risk_upper_bound(const RiskParams& params);

struct EmpiricalRisk {
  double p_error = 0.0;
  double p_reject = 0.0;
  double p_accept = 0.0;
  double risk = 0.0;
};

/// Counting estimate over z = y * phi: accept z >= t, error z <= -t, reject in
/// between. As in decide(), z = 0 at t = 0 is accepted.
EmpiricalRisk empirical_risk(std::span<const double> z, double t, double c1, double c2);

struct CorrelationSummary {
  /// Absent when every pair was excluded.
  std::optional<double> mean;
  std::size_t pairs_used = 0;
  /// Pairs involving a constant history.
  std::size_t pairs_excluded = 0;
};

/// Mean Pearson correlation over all member pairs of equal-length vote histories.
CorrelationSummary pairwise_correlation(const std::vector<std::vector<double>>& histories);

}  // namespace sparsedrift
