#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsedrift/detectors/detector.hpp"
#include "sparsedrift/learner.hpp"
#include "sparsedrift/streamgen.hpp"

namespace sparsedrift {

enum class RetrainPolicy { reset, keep };

/// One record per stream instance, in order.
struct RunTrace {
  std::vector<std::uint8_t> predictions;
  std::vector<std::uint8_t> truths;
  std::vector<double> losses;
  std::vector<Signal> signals;
  std::vector<std::uint8_t> retrained;
  /// Filled only when the detector is an ensemble.
  std::vector<double> ensemble_scores;
  std::vector<std::uint32_t> ensemble_active;
  DriftSpec drift;

  std::size_t size() const { return losses.size(); }
  /// Instance indices of Drift signals.
  std::vector<std::size_t> detections() const;
};

/// Test-then-train: predict, score the 0/1 loss, feed it to the detector, train.
/// A Drift applies `policy` before the learner sees the instance.
/// A null detector runs without drift handling.
RunTrace prequential_run(const LabeledStream& stream, Learner& learner, DriftDetector* detector,
                         RetrainPolicy policy = RetrainPolicy::reset);

/// e_i = (1/i) sum_{k<=i} L_k.
std::vector<double> prequential_error(std::span<const double> losses);
/// 1 - e_n.
double accuracy(std::span<const double> losses);

struct DetectionMetrics {
  /// Mean delay to the first true detection of each detected drift.
  std::optional<double> add;
  double tpr = 0.0;
  /// Absent when the stream has no actual drift.
  std::optional<double> tpd;
  std::size_t drift_count = 0;
  std::size_t detections = 0;
  std::size_t true_detections = 0;
  /// Acceptable detection interval per actual drift.
  std::vector<std::size_t> adi;
};

/// A detection at d is true for the drift at p when p < d <= p + ADI, with
/// ADI = max(4 * width, adi_floor). Each detection goes to the earliest drift
/// that contains it and has no detection yet, otherwise to the earliest that
/// contains it.
DetectionMetrics detection_metrics(std::span<const std::size_t> detected, const DriftSpec& truth,
                                   std::size_t adi_floor = 250);

struct MetricsReport {
  std::vector<double> prequential_error;
  double accuracy = 0.0;
  DetectionMetrics detection;
};

MetricsReport evaluate(const RunTrace& trace, std::size_t adi_floor = 250);

}  // namespace sparsedrift
