#include "sparsedrift/evaluation.hpp"

#include <algorithm>

#include "sparsedrift/ensemble.hpp"
#include "sparsedrift/errors.hpp"

namespace sparsedrift {

std::vector<std::size_t> RunTrace::detections() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i] == Signal::drift) out.push_back(i);
  return out;
}

RunTrace prequential_run(const LabeledStream& stream, Learner& learner, DriftDetector* detector,
                         RetrainPolicy policy) {
  const auto& features = stream.features;
  if (features.missing_count() != 0) throw InputError("prequential_run: stream has missing cells; impute first");
  if (static_cast<std::size_t>(features.rows()) != stream.size())
    throw SpecError("prequential_run: feature rows and labels differ in length");

  auto* ensemble = dynamic_cast<EnsembleDetector*>(detector);
  RunTrace trace;
  const std::size_t n = stream.size();
  trace.predictions.reserve(n);
  trace.truths.reserve(n);
  trace.losses.reserve(n);
  trace.signals.reserve(n);
  trace.retrained.reserve(n);
  trace.drift = stream.drift;

  std::vector<double> x(static_cast<std::size_t>(features.cols()));
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) x[static_cast<std::size_t>(j)] = features.values()(static_cast<Eigen::Index>(i), j);
    const std::uint8_t truth = stream.labels[i];
    const std::uint8_t prediction = learner.predict(x);
    const double loss = prediction == truth ? 0.0 : 1.0;
    Signal signal = Signal::in_control;
    if (detector) {
      signal = detector->update(loss).signal;
      if (ensemble) {
        trace.ensemble_scores.push_back(ensemble->last_output().score);
        trace.ensemble_active.push_back(ensemble->last_output().active);
      }
    }
    const bool retrain = signal == Signal::drift && policy == RetrainPolicy::reset;
    if (retrain) learner.reset();
    learner.update(x, truth);

    trace.predictions.push_back(prediction);
    trace.truths.push_back(truth);
    trace.losses.push_back(loss);
    trace.signals.push_back(signal);
    trace.retrained.push_back(retrain ? 1 : 0);
  }
  return trace;
}

std::vector<double> prequential_error(std::span<const double> losses) {
  std::vector<double> e;
  e.reserve(losses.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    sum += losses[i];
    e.push_back(sum / static_cast<double>(i + 1));
  }
  return e;
}

double accuracy(std::span<const double> losses) {
  if (losses.empty()) throw InputError("accuracy: empty trace");
  double sum = 0.0;
  for (double l : losses) sum += l;
  return 1.0 - sum / static_cast<double>(losses.size());
}

DetectionMetrics detection_metrics(std::span<const std::size_t> detected, const DriftSpec& truth,
                                   std::size_t adi_floor) {
  if (!std::is_sorted(detected.begin(), detected.end())) throw InputError("detection_metrics: detections not sorted");
  DetectionMetrics m;
  m.detections = detected.size();
  const std::size_t drifts = truth.positions.size();
  for (std::size_t k = 0; k < drifts; ++k) m.adi.push_back(std::max(4 * truth.width(k), adi_floor));

  std::vector<std::optional<std::size_t>> first(drifts);
  for (std::size_t d : detected) {
    std::optional<std::size_t> target;
    for (std::size_t k = 0; k < drifts; ++k) {
      const std::size_t p = truth.positions[k];
      if (!(p < d && d <= p + m.adi[k])) continue;
      if (!first[k]) {
        target = k;
        break;
      }
      if (!target) target = k;
    }
    if (!target) continue;
    ++m.true_detections;
    if (!first[*target]) first[*target] = d;
  }

  m.tpr = m.detections ? static_cast<double>(m.true_detections) / static_cast<double>(m.detections) : 0.0;
  if (drifts) m.tpd = static_cast<double>(m.true_detections) / static_cast<double>(drifts);
  double delay = 0.0;
  for (std::size_t k = 0; k < drifts; ++k) {
    if (!first[k]) continue;
    ++m.drift_count;
    delay += static_cast<double>(*first[k] - truth.positions[k]);
  }
  if (m.drift_count) m.add = delay / static_cast<double>(m.drift_count);
  return m;
}

MetricsReport evaluate(const RunTrace& trace, std::size_t adi_floor) {
  MetricsReport report;
  report.prequential_error = prequential_error(trace.losses);
  report.accuracy = accuracy(trace.losses);
  const auto detected = trace.detections();
  report.detection = detection_metrics(detected, trace.drift, adi_floor);
  return report;
}

}  // namespace sparsedrift
