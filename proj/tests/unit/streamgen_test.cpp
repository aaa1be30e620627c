#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/random.hpp"
#include "sparsedrift/stats.hpp"
#include "sparsedrift/streamgen.hpp"

namespace sd = sparsedrift;

namespace {

sd::LabeledStream constant_stream(std::size_t n) {
  sd::LabeledStream s;
  s.features = sd::MaskedMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 1));
  s.labels.assign(n, 0);
  return s;
}

sd::MaskedMatrix gaussian_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  sd::Rng rng(seed);
  Eigen::MatrixXd v(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i, j) = rng.normal();
  return sd::MaskedMatrix(v);
}

std::vector<double> mask_indicator(const sd::MaskedMatrix& m, Eigen::Index j) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m.observed(i, j) ? 1.0 : 0.0);
  return out;
}

std::vector<double> column(const sd::MaskedMatrix& m, Eigen::Index j) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m(i, j));
  return out;
}

}  // namespace

TEST(SampleDistribution, NormalMoments) {
  const auto x = sd::sample_distribution(sd::Normal{0.0, 1.0}, 100000, 7);
  ASSERT_EQ(x.cols(), 1);
  const double mean = x.mean();
  const double sd_ = std::sqrt((x.array() - mean).square().mean());
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(sd_, 1.0, 0.02);
}

TEST(SampleDistribution, ChiSquaredMean) {
  const auto x = sd::sample_distribution(sd::ChiSquared{4.0}, 100000, 7);
  EXPECT_NEAR(x.mean(), 4.0, 0.1);
  EXPECT_GE(x.minCoeff(), 0.0);
}

TEST(SampleDistribution, UniformBoundsAndDegenerate) {
  const auto x = sd::sample_distribution(sd::Uniform{2.0, 3.0}, 1000, 1);
  EXPECT_GE(x.minCoeff(), 2.0);
  EXPECT_LT(x.maxCoeff(), 3.0);
  EXPECT_THROW(sd::sample_distribution(sd::Uniform{5.0, 5.0}, 10, 1), sd::ParameterError);
}

TEST(SampleDistribution, InvalidParameters) {
  EXPECT_THROW(sd::sample_distribution(sd::Normal{0.0, 0.0}, 10, 1), sd::ParameterError);
  EXPECT_THROW(sd::sample_distribution(sd::ChiSquared{0.5}, 10, 1), sd::ParameterError);
  EXPECT_THROW(sd::sample_distribution(sd::Binomial{10, 1.5}, 10, 1), sd::ParameterError);
  Eigen::MatrixXd cov(2, 2);
  cov << 1, 2, 2, 1;  // eigenvalues 3 and -1
  EXPECT_THROW(sd::sample_distribution(sd::MultivariateNormal{Eigen::Vector2d::Zero(), cov}, 10, 1),
               sd::ParameterError);
}

TEST(SampleDistribution, MultivariateNormalCorrelation) {
  Eigen::MatrixXd cov(2, 2);
  cov << 1, 0.8, 0.8, 1;
  const auto x = sd::sample_distribution(sd::MultivariateNormal{Eigen::Vector2d(1, -1), cov}, 50000, 3);
  ASSERT_EQ(x.cols(), 2);
  std::vector<double> a(x.col(0).data(), x.col(0).data() + x.rows());
  std::vector<double> b(x.col(1).data(), x.col(1).data() + x.rows());
  EXPECT_NEAR(*sd::stats::pearson(a, b), 0.8, 0.01);
  EXPECT_NEAR(sd::stats::mean(a), 1.0, 0.02);
  EXPECT_NEAR(sd::stats::mean(b), -1.0, 0.02);
}

TEST(SampleDistribution, DeterministicPerSeed) {
  for (sd::DistributionSpec spec : {sd::DistributionSpec{sd::Normal{}}, sd::DistributionSpec{sd::Cauchy{}},
                                    sd::DistributionSpec{sd::Binomial{20, 0.5}}}) {
    EXPECT_EQ(sd::sample_distribution(spec, 500, 9), sd::sample_distribution(spec, 500, 9));
    EXPECT_NE(sd::sample_distribution(spec, 500, 9), sd::sample_distribution(spec, 500, 10));
  }
}

TEST(DriftStream, AbruptComplementsSuffix) {
  auto base = sd::make_classification_stream({.instances = 1000}, 1);
  sd::DriftSpec drift{{500}, {0}, sd::DriftKind::abrupt};
  const auto s = sd::make_drift_stream(base, drift, 2);
  for (std::size_t i = 0; i < 1000; ++i) ASSERT_EQ(s.labels[i], i < 500 ? base.labels[i] : 1 - base.labels[i]) << i;
  EXPECT_EQ(s.drift, drift);
  EXPECT_EQ(s.features, base.features);
}

TEST(DriftStream, GradualWidthZeroEqualsAbrupt) {
  auto base = sd::make_classification_stream({.instances = 1000}, 1);
  const auto abrupt = sd::make_drift_stream(base, {{500}, {0}, sd::DriftKind::abrupt}, 3);
  const auto gradual = sd::make_drift_stream(base, {{500}, {0}, sd::DriftKind::gradual}, 3);
  EXPECT_EQ(abrupt.labels, gradual.labels);
}

TEST(DriftStream, GradualRampFlipsHalfOnAverage) {
  auto base = sd::make_classification_stream({.instances = 1000}, 4);
  const auto s = sd::make_drift_stream(base, {{400}, {200}, sd::DriftKind::gradual}, 5);
  int flipped = 0;
  for (std::size_t i = 400; i < 600; ++i) flipped += s.labels[i] != base.labels[i];
  EXPECT_NEAR(flipped / 200.0, 0.5, 0.07);
  for (std::size_t i = 0; i < 400; ++i) ASSERT_EQ(s.labels[i], base.labels[i]);
  for (std::size_t i = 600; i < 1000; ++i) ASSERT_NE(s.labels[i], base.labels[i]);
}

TEST(DriftStream, SecondDriftToggleBack) {
  auto base = sd::make_classification_stream({.instances = 300}, 4);
  const auto s = sd::make_drift_stream(base, {{100, 200}, {}, sd::DriftKind::abrupt}, 5);
  for (std::size_t i = 200; i < 300; ++i) ASSERT_EQ(s.labels[i], base.labels[i]);
}

TEST(DriftStream, OverlapAndRangeErrors) {
  auto base = sd::make_classification_stream({.instances = 1000}, 1);
  EXPECT_THROW(sd::make_drift_stream(base, {{400, 500}, {200, 10}, sd::DriftKind::gradual}, 1), sd::SpecError);
  EXPECT_THROW(sd::make_drift_stream(base, {{900}, {200}, sd::DriftKind::gradual}, 1), sd::SpecError);
  EXPECT_THROW(sd::make_drift_stream(base, {{500, 400}, {}, sd::DriftKind::abrupt}, 1), sd::SpecError);
}

TEST(ClassificationStream, BalancedAndSeparable) {
  const auto s = sd::make_classification_stream({.instances = 4000, .features = 3}, 8);
  EXPECT_EQ(s.size(), 4000u);
  EXPECT_EQ(s.features.cols(), 3);
  double ones = 0;
  for (auto l : s.labels) ones += l;
  EXPECT_NEAR(ones / 4000, 0.5, 0.03);
  EXPECT_TRUE(s.features.complete());
}

TEST(InjectSparsity, ZeroRateIsNoOp) {
  const auto m = gaussian_matrix(200, 3, 1);
  for (auto mech : {sd::Mechanism::mcar, sd::Mechanism::mnar}) {
    EXPECT_EQ(sd::inject_sparsity(m, {mech, 0.0, {0, 1}, {}, 1}), m);
  }
  EXPECT_EQ(sd::inject_sparsity(m, {sd::Mechanism::mar, 0.0, {0}, 2, 1}), m);
}

TEST(InjectSparsity, McarRate) {
  const auto m = gaussian_matrix(10000, 1, 2);
  const auto out = sd::inject_sparsity(m, {sd::Mechanism::mcar, 0.3, {0}, {}, 5});
  EXPECT_NEAR(out.sparsity(0), 0.3, 0.02);
}

TEST(InjectSparsity, MnarMasksTopValues) {
  const auto m = gaussian_matrix(1000, 1, 3);
  const auto out = sd::inject_sparsity(m, {sd::Mechanism::mnar, 0.3, {0}, {}, 5});
  double min_masked = INFINITY, max_observed = -INFINITY;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (out.observed(i, 0)) max_observed = std::max(max_observed, m(i, 0));
    else min_masked = std::min(min_masked, m(i, 0));
  }
  EXPECT_GE(min_masked, max_observed);
  EXPECT_EQ(out.missing_count(0), 300);
}

TEST(InjectSparsity, MarUsesDriverAndNeverMasksIt) {
  const auto m = gaussian_matrix(10000, 3, 4);
  const auto out = sd::inject_sparsity(m, {sd::Mechanism::mar, 0.2, {0, 1}, 2, 5});
  EXPECT_EQ(out.missing_count(2), 0);
  EXPECT_NEAR(out.sparsity(0), 0.2, 1e-12);
  const auto r = sd::stats::pearson(mask_indicator(out, 0), column(m, 2));
  ASSERT_TRUE(r);
  EXPECT_LT(sd::stats::correlation_p_value(*r, 10000), 0.01);
  // The same rows are masked in every target.
  for (Eigen::Index i = 0; i < m.rows(); ++i) ASSERT_EQ(out.observed(i, 0), out.observed(i, 1));
}

TEST(InjectSparsity, McarIndependentOfEveryFeature) {
  const auto m = gaussian_matrix(10000, 3, 5);
  const auto out = sd::inject_sparsity(m, {sd::Mechanism::mcar, 0.3, {0}, {}, 6});
  for (Eigen::Index k = 0; k < 3; ++k)
    EXPECT_LT(std::fabs(*sd::stats::pearson(mask_indicator(out, 0), column(m, k))), 0.05) << k;
}

TEST(InjectSparsity, NeverUnmasksOrAltersObserved) {
  auto m = gaussian_matrix(500, 3, 6);
  m = sd::inject_sparsity(m, {sd::Mechanism::mcar, 0.2, {0, 1, 2}, {}, 1});
  for (auto plan : {sd::SparsityPlan{sd::Mechanism::mcar, 0.3, {0, 1}, {}, 2},
                    sd::SparsityPlan{sd::Mechanism::mnar, 0.3, {1}, {}, 2},
                    sd::SparsityPlan{sd::Mechanism::mar, 0.3, {0, 1}, 2, 2}}) {
    const auto out = sd::inject_sparsity(m, plan);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!m.observed(i, j)) ASSERT_FALSE(out.observed(i, j));
        if (out.observed(i, j)) ASSERT_EQ(std::memcmp(&out.values()(i, j), &m.values()(i, j), sizeof(double)), 0);
      }
  }
}

TEST(InjectSparsity, Errors) {
  const auto m = gaussian_matrix(100, 3, 7);
  EXPECT_THROW(sd::inject_sparsity(m, {sd::Mechanism::mar, 0.2, {0}, {}, 1}), sd::SpecError);
  EXPECT_THROW(sd::inject_sparsity(m, {sd::Mechanism::mar, 0.2, {0}, 0, 1}), sd::SpecError);
  EXPECT_THROW(sd::inject_sparsity(m, {sd::Mechanism::mcar, 1.5, {0}, {}, 1}), sd::ParameterError);
  EXPECT_THROW(sd::inject_sparsity(m, {sd::Mechanism::mcar, -0.1, {0}, {}, 1}), sd::ParameterError);
}

TEST(InjectSparsity, Deterministic) {
  const auto m = gaussian_matrix(1000, 2, 8);
  const sd::SparsityPlan plan{sd::Mechanism::mcar, 0.4, {0, 1}, {}, 77};
  EXPECT_EQ(sd::inject_sparsity(m, plan), sd::inject_sparsity(m, plan));
}

TEST(Shuffle, EmptyStream) {
  const auto s = sd::shuffle_instances(constant_stream(0), 1);
  EXPECT_EQ(s.size(), 0u);
}

TEST(Shuffle, PermutationPreservesPairs) {
  const auto base = sd::make_drift_stream(sd::make_classification_stream({.instances = 500}, 2),
                                          {{250}, {}, sd::DriftKind::abrupt}, 3);
  const auto s = sd::shuffle_instances(base, 4);
  EXPECT_TRUE(s.drift.positions.empty());
  std::multiset<std::pair<double, int>> a, b;
  for (std::size_t i = 0; i < 500; ++i) {
    a.insert({base.features(static_cast<Eigen::Index>(i), 0), base.labels[i]});
    b.insert({s.features(static_cast<Eigen::Index>(i), 0), s.labels[i]});
  }
  EXPECT_EQ(a, b);
  const auto again = sd::shuffle_instances(base, 4);
  EXPECT_EQ(again.labels, s.labels);
  EXPECT_EQ(again.features, s.features);
}
