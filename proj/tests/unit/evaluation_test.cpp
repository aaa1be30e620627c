#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sparsedrift/ensemble.hpp"
#include "sparsedrift/errors.hpp"
#include "sparsedrift/evaluation.hpp"
#include "sparsedrift/learner.hpp"
#include "sparsedrift/random.hpp"
#include "sparsedrift/streamgen.hpp"

namespace sd = sparsedrift;

namespace {

sd::DriftSpec single_drift(std::size_t position, std::size_t width) {
  return {{position}, {width}, width ? sd::DriftKind::gradual : sd::DriftKind::abrupt};
}

double window_accuracy(const sd::RunTrace& trace, std::size_t from, std::size_t to) {
  double correct = 0;
  for (std::size_t i = from; i < to; ++i) correct += 1.0 - trace.losses[i];
  return correct / static_cast<double>(to - from);
}

sd::LabeledStream flip_stream(std::uint64_t seed) {
  const auto base = sd::make_classification_stream({.instances = 10000, .features = 4}, seed);
  return sd::make_drift_stream(base, single_drift(5000, 0), seed + 1);
}

}  // namespace

TEST(PrequentialError, Examples) {
  const auto e = sd::prequential_error(std::vector<double>{1, 0, 1});
  ASSERT_EQ(e.size(), 3u);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], 0.5);
  EXPECT_NEAR(e[2], 2.0 / 3.0, 1e-15);
  for (double v : sd::prequential_error(std::vector<double>(50, 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(PrequentialError, RecurrenceMatchesDirectSum) {
  sd::Rng rng(1);
  std::vector<double> losses(10000);
  for (auto& l : losses) l = rng.bernoulli(0.3) ? 1.0 : 0.0;
  const auto e = sd::prequential_error(losses);
  double sum = 0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    sum += losses[i];
    ASSERT_NEAR(e[i], sum / static_cast<double>(i + 1), 1e-12) << i;
  }
  EXPECT_DOUBLE_EQ(sd::accuracy(losses), 1.0 - e.back());
}

TEST(Accuracy, Examples) {
  EXPECT_NEAR(sd::accuracy(std::vector<double>{1, 0, 1}), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(sd::accuracy(std::vector<double>(10, 0.0)), 1.0);
  EXPECT_THROW(sd::accuracy(std::vector<double>{}), sd::InputError);
}

TEST(DetectionMetrics, SingleTrueDetection) {
  const auto m = sd::detection_metrics(std::vector<std::size_t>{5600}, single_drift(5000, 250));
  ASSERT_EQ(m.adi, (std::vector<std::size_t>{1000}));
  EXPECT_DOUBLE_EQ(*m.add, 600);
  EXPECT_DOUBLE_EQ(m.tpr, 1.0);
  EXPECT_DOUBLE_EQ(*m.tpd, 1.0);
  EXPECT_EQ(m.drift_count, 1u);
}

TEST(DetectionMetrics, RepeatedDetectionsInflateTpd) {
  const auto m = sd::detection_metrics(std::vector<std::size_t>{5600, 5800}, single_drift(5000, 250));
  EXPECT_DOUBLE_EQ(m.tpr, 1.0);
  EXPECT_DOUBLE_EQ(*m.tpd, 2.0);
  EXPECT_EQ(m.drift_count, 1u);
  EXPECT_DOUBLE_EQ(*m.add, 600);
}

TEST(DetectionMetrics, MissOutsideInterval) {
  const auto m = sd::detection_metrics(std::vector<std::size_t>{300}, single_drift(5000, 250));
  EXPECT_DOUBLE_EQ(m.tpr, 0.0);
  EXPECT_DOUBLE_EQ(*m.tpd, 0.0);
  EXPECT_EQ(m.drift_count, 0u);
  EXPECT_FALSE(m.add);
}

TEST(DetectionMetrics, IntervalBoundaries) {
  // Abrupt drift: ADI is the floor; p itself is not a valid detection, p + ADI is.
  const auto drift = single_drift(1000, 0);
  EXPECT_EQ(sd::detection_metrics(std::vector<std::size_t>{1000}, drift).true_detections, 0u);
  EXPECT_EQ(sd::detection_metrics(std::vector<std::size_t>{1250}, drift).true_detections, 1u);
  EXPECT_EQ(sd::detection_metrics(std::vector<std::size_t>{1251}, drift).true_detections, 0u);
  EXPECT_EQ(sd::detection_metrics(std::vector<std::size_t>{1100}, drift, 50).true_detections, 0u);
}

TEST(DetectionMetrics, PerfectDetector) {
  const sd::DriftSpec truth{{1000, 3000, 6000}, {100, 100, 100}, sd::DriftKind::gradual};
  const auto m = sd::detection_metrics(std::vector<std::size_t>{1001, 3001, 6001}, truth);
  EXPECT_DOUBLE_EQ(*m.add, 1.0);
  EXPECT_DOUBLE_EQ(m.tpr, 1.0);
  EXPECT_DOUBLE_EQ(*m.tpd, 1.0);
  EXPECT_EQ(m.drift_count, 3u);
}

TEST(DetectionMetrics, OverlappingIntervalsFillEarliestUnfilled) {
  // ADIs (1000, 1400] and (1200, 1600] overlap.
  const sd::DriftSpec truth{{1000, 1200}, {100, 100}, sd::DriftKind::gradual};
  const auto m = sd::detection_metrics(std::vector<std::size_t>{1300, 1350}, truth);
  EXPECT_EQ(m.drift_count, 2u);
  EXPECT_DOUBLE_EQ(*m.add, (300.0 + 150.0) / 2.0);
}

TEST(DetectionMetrics, Invariants) {
  sd::Rng rng(4);
  const sd::DriftSpec truth{{2000, 5000, 8000}, {0, 300, 100}, sd::DriftKind::gradual};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> detected;
    for (std::size_t k = 0, n = rng.below(12); k < n; ++k) detected.push_back(rng.below(10000));
    std::sort(detected.begin(), detected.end());
    const auto m = sd::detection_metrics(detected, truth);
    EXPECT_GE(m.tpr, 0.0);
    EXPECT_LE(m.tpr, 1.0);
    EXPECT_LE(m.drift_count, 3u);
    EXPECT_NEAR(m.tpr * static_cast<double>(detected.size()), static_cast<double>(m.true_detections), 1e-9);
    if (m.add) {
      EXPECT_GT(*m.add, 0.0);
      EXPECT_LE(*m.add, 1200.0);
    }
  }
}

TEST(DetectionMetrics, Errors) {
  EXPECT_THROW(sd::detection_metrics(std::vector<std::size_t>{5, 3}, single_drift(1, 0)), sd::InputError);
  const auto m = sd::detection_metrics(std::vector<std::size_t>{5, 30}, sd::DriftSpec{});
  EXPECT_FALSE(m.tpd);
  EXPECT_EQ(m.detections, 2u);
  EXPECT_EQ(m.true_detections, 0u);
}

TEST(NaiveBayes, ClosedFormPosterior) {
  sd::GaussianNaiveBayes nb;
  for (int i = 0; i < 50; ++i) nb.update(std::vector<double>{0.0}, 0);
  for (int i = 0; i < 50; ++i) nb.update(std::vector<double>{1.0}, 1);
  EXPECT_EQ(nb.predict(std::vector<double>{0.1}), 0);
  EXPECT_EQ(nb.predict(std::vector<double>{0.9}), 1);
  // Both classes have zero spread, so the variance floor applies.
  const double floor = 1e-9;
  const double prior = std::log(51.0 / 102.0);
  const double expected0 = prior - 0.5 * std::log(2 * M_PI * floor) - 0.01 / (2 * floor);
  EXPECT_NEAR(nb.log_joint(std::vector<double>{0.1}, 0), expected0, 1e-6 * std::fabs(expected0));
}

TEST(NaiveBayes, UntrainedReturnsPrior) {
  EXPECT_EQ(sd::GaussianNaiveBayes().predict(std::vector<double>{3.0}), 0);
  EXPECT_EQ(sd::GaussianNaiveBayes({.prior_label = 1}).predict(std::vector<double>{3.0}), 1);
}

TEST(NaiveBayes, DuplicationInvariance) {
  sd::Rng rng(2);
  sd::GaussianNaiveBayes once, twice;
  for (int i = 0; i < 200; ++i) {
    const std::uint8_t y = rng.bernoulli(0.4);
    const std::vector<double> x{rng.normal(y ? 1.0 : -1.0, 1.0), rng.normal(0.0, y ? 2.0 : 1.0)};
    once.update(x, y);
    twice.update(x, y);
    twice.update(x, y);
  }
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> x{rng.uniform(-4, 4), rng.uniform(-4, 4)};
    ASSERT_EQ(once.predict(x), twice.predict(x));
  }
  EXPECT_NEAR(once.variance(1, 0), twice.variance(1, 0), 1e-12);
}

TEST(NaiveBayes, PermutationChangesOnlyRounding) {
  sd::Rng rng(3);
  std::vector<std::pair<std::vector<double>, std::uint8_t>> batch;
  for (int i = 0; i < 300; ++i) {
    const std::uint8_t y = rng.bernoulli(0.5);
    batch.push_back({{rng.normal(y * 2.0, 1.0), rng.normal(100.0, 1e-3)}, y});
  }
  sd::GaussianNaiveBayes forward, backward;
  for (const auto& [x, y] : batch) forward.update(x, y);
  for (auto it = batch.rbegin(); it != batch.rend(); ++it) backward.update(it->first, it->second);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{rng.uniform(-3, 5), rng.normal(100.0, 1e-3)};
    const double margin_f = forward.log_joint(x, 1) - forward.log_joint(x, 0);
    const double margin_b = backward.log_joint(x, 1) - backward.log_joint(x, 0);
    ASSERT_NEAR(margin_f, margin_b, 1e-9 * std::max(1.0, std::fabs(margin_f)));
  }
  for (std::uint8_t c : {0, 1})
    for (std::size_t j = 0; j < 2; ++j) EXPECT_GE(forward.variance(c, j), 0.0);
}

TEST(NaiveBayes, ResetAndErrors) {
  sd::GaussianNaiveBayes nb;
  nb.update(std::vector<double>{1.0, 2.0}, 1);
  EXPECT_THROW(nb.update(std::vector<double>{1.0}, 1), sd::InputError);
  EXPECT_THROW(nb.update(std::vector<double>{1.0, NAN}, 1), sd::InputError);
  EXPECT_THROW(nb.update(std::vector<double>{1.0, 2.0}, 2), sd::InputError);
  nb.reset();
  EXPECT_EQ(nb.stats(1).count, 0u);
  EXPECT_NO_THROW(nb.update(std::vector<double>{1.0}, 1));
}

// DDM and EDDM raise occasional false alarms on stationary error streams (EDDM
// compares against a running maximum of a noisy statistic), so they only get a
// bound; the other five stay silent.
TEST(PrequentialRun, DriftFreeStreamStaysAccurate) {
  for (std::uint64_t seed = 21; seed <= 25; ++seed) {
    const auto stream = sd::make_classification_stream({.instances = 10000, .features = 4}, seed);
    for (auto kind : sd::kAllDetectors) {
      sd::GaussianNaiveBayes nb;
      auto detector = sd::make_detector(kind);
      const auto trace = sd::prequential_run(stream, nb, detector.get());
      ASSERT_EQ(trace.size(), stream.size());
      EXPECT_GE(sd::accuracy(trace.losses), 0.95) << sd::to_string(kind);
      const int retrains = std::accumulate(trace.retrained.begin(), trace.retrained.end(), 0);
      const bool noisy = kind == sd::DetectorKind::ddm || kind == sd::DetectorKind::eddm;
      EXPECT_LE(retrains, noisy ? 5 : 0) << sd::to_string(kind) << " seed " << seed;
    }
  }
}

TEST(PrequentialRun, StaleConceptWithoutDetector) {
  const auto stream = flip_stream(31);
  sd::GaussianNaiveBayes nb;
  const auto trace = sd::prequential_run(stream, nb, nullptr);
  EXPECT_GE(window_accuracy(trace, 0, 5000), 0.95);
  EXPECT_LE(window_accuracy(trace, 5000, 6000), 0.5);
  EXPECT_TRUE(trace.detections().empty());
}

TEST(PrequentialRun, EnsembleResetRecovers) {
  const auto stream = flip_stream(31);
  sd::GaussianNaiveBayes nb;
  sd::EnsembleDetector ensemble(sd::EnsembleConfig::abrupt());
  const auto trace = sd::prequential_run(stream, nb, &ensemble);
  EXPECT_GT(window_accuracy(trace, 7000, 7500), 0.9);
  const auto detected = trace.detections();
  ASSERT_FALSE(detected.empty());
  EXPECT_GT(detected.front(), 5000u);
  EXPECT_EQ(trace.ensemble_scores.size(), stream.size());
  for (std::size_t i : detected) EXPECT_EQ(trace.retrained[i], 1);
  const auto report = sd::evaluate(trace);
  EXPECT_EQ(report.detection.drift_count, 1u);
}

TEST(PrequentialRun, KeepPolicyDoesNotReset) {
  const auto stream = flip_stream(32);
  sd::GaussianNaiveBayes nb;
  sd::Ddm ddm;
  const auto trace = sd::prequential_run(stream, nb, &ddm, sd::RetrainPolicy::keep);
  EXPECT_EQ(std::accumulate(trace.retrained.begin(), trace.retrained.end(), 0), 0);
  EXPECT_FALSE(trace.detections().empty());
}

TEST(PrequentialRun, MissingCellIsHardError) {
  auto stream = sd::make_classification_stream({.instances = 100, .features = 2}, 1);
  stream.features.set_missing(10, 1);
  sd::GaussianNaiveBayes nb;
  EXPECT_THROW(sd::prequential_run(stream, nb, nullptr), sd::InputError);
}
