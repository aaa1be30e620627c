#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <optional>

#include "sparsedrift/detectors.hpp"
#include "sparsedrift/errors.hpp"
#include "sparsedrift/random.hpp"

namespace sd = sparsedrift;

namespace {

std::vector<std::size_t> drifts(sd::DriftDetector& d, const std::vector<double>& xs) {
  std::vector<std::size_t> out;
  for (double x : xs)
    if (auto o = d.update(x); o.signal == sd::Signal::drift) out.push_back(o.index);
  return out;
}

std::vector<double> bernoulli_step(std::size_t change, std::size_t n, double before, double after, std::uint64_t seed) {
  sd::Rng rng(seed);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = rng.bernoulli(i < change ? before : after) ? 1.0 : 0.0;
  return xs;
}

// Page-Hinkley recurrence evaluated directly.
std::optional<std::size_t> page_hinkley_oracle(const std::vector<double>& xs, double delta, double lambda, double alpha) {
  double mean = 0, m = 0, m_min = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean = mean + (xs[i] - mean) / static_cast<double>(i + 1);
    m = alpha * m + xs[i] - mean - delta;
    m_min = i == 0 ? m : std::min(m_min, m);
    if (m - m_min > lambda) return i;
  }
  return std::nullopt;
}

// DDM on the exact p_i / s_i recurrences.
std::optional<std::size_t> ddm_oracle(const std::vector<double>& xs) {
  double errors = 0, p_min = INFINITY, s_min = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    errors += xs[i];
    const double n = static_cast<double>(i + 1);
    const double p = errors / n, s = std::sqrt(p * (1 - p) / n);
    if (i + 1 < 30) continue;
    if (p + s <= p_min + s_min) p_min = p, s_min = s;
    if (p + s > p_min + 3 * s_min) return i;
  }
  return std::nullopt;
}

// ADWIN without buckets: every split of the exact window is checked.
struct ExactAdwin {
  std::deque<double> window;
  double delta = 0.002;

  bool update(double x) {
    window.push_back(x);
    bool drift = false;
    for (bool cut = true; cut && window.size() > 10;) {
      cut = false;
      const double n = static_cast<double>(window.size());
      double total = 0;
      for (double v : window) total += v;
      const double mean = total / n;
      double var = 0;
      for (double v : window) var += (v - mean) * (v - mean);
      var /= n;
      const double dd = std::log(2 * std::log(n) / delta);
      double n0 = 0, s0 = 0;
      for (std::size_t k = 0; k + 1 < window.size(); ++k) {
        n0 += 1;
        s0 += window[k];
        const double n1 = n - n0;
        if (n0 <= 5 || n1 <= 5) continue;
        const double m = 1 / (n0 - 4) + 1 / (n1 - 4);
        const double eps = std::sqrt(2 * m * var * dd) + 2.0 / 3.0 * dd * m;
        if (std::fabs(s0 / n0 - (total - s0) / n1) > eps) {
          cut = drift = true;
          window.pop_front();
          break;
        }
      }
    }
    return drift;
  }
};

}  // namespace

// ---- zero-variance immunity and determinism for every detector ----

class EveryDetector : public ::testing::TestWithParam<sd::DetectorKind> {};

TEST_P(EveryDetector, ConstantStreamNeverDrifts) {
  for (double value : {0.0, 1.0}) {
    auto d = sd::make_detector(GetParam());
    for (int i = 0; i < 100000; ++i) ASSERT_NE(d->update(value).signal, sd::Signal::drift) << i << " value " << value;
  }
}

TEST_P(EveryDetector, DeterministicOutputs) {
  const auto xs = bernoulli_step(3000, 6000, 0.1, 0.6, 12);
  auto a = sd::make_detector(GetParam());
  auto b = sd::make_detector(GetParam());
  for (double x : xs) ASSERT_EQ(a->update(x).signal, b->update(x).signal);
}

TEST_P(EveryDetector, DetectsErrorRateStep) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto d = sd::make_detector(GetParam());
    const auto found = drifts(*d, bernoulli_step(5000, 10000, 0.1, 0.9, seed));
    EXPECT_TRUE(std::any_of(found.begin(), found.end(), [](auto i) { return i > 5000 && i <= 5250; }))
        << sd::to_string(GetParam()) << " seed " << seed;
  }
}

TEST_P(EveryDetector, IndexCountsAcrossResets) {
  auto d = sd::make_detector(GetParam());
  const auto xs = bernoulli_step(500, 1500, 0.0, 1.0, 3);
  for (std::size_t i = 0; i < xs.size(); ++i) ASSERT_EQ(d->update(xs[i]).index, i);
  EXPECT_EQ(d->instances_seen(), xs.size());
  d->reset();
  EXPECT_EQ(d->instances_seen(), 0u);
}

TEST_P(EveryDetector, CloneContinuesIdentically) {
  auto d = sd::make_detector(GetParam());
  const auto xs = bernoulli_step(2000, 4000, 0.2, 0.7, 8);
  for (std::size_t i = 0; i < 1000; ++i) d->update(xs[i]);
  auto c = d->clone();
  for (std::size_t i = 1000; i < xs.size(); ++i) ASSERT_EQ(d->update(xs[i]).signal, c->update(xs[i]).signal);
}

INSTANTIATE_TEST_SUITE_P(All, EveryDetector, ::testing::ValuesIn(sd::kAllDetectors),
                         [](const auto& info) { return sd::to_string(info.param); });

TEST(DetectorKind, ParseRoundTrip) {
  for (auto k : sd::kAllDetectors) EXPECT_EQ(sd::parse_detector_kind(sd::to_string(k)), k);
  EXPECT_THROW(sd::parse_detector_kind("fuzzy"), sd::ConfigError);
}

// ---- Page-Hinkley ----

TEST(PageHinkley, StepMatchesRecurrenceOracle) {
  std::vector<double> xs(1000, 0.0);
  xs.resize(3000, 1.0);
  sd::PageHinkley ph;
  const auto found = drifts(ph, xs);
  const auto expected = page_hinkley_oracle(xs, 0.005, 50, 0.9999);
  ASSERT_TRUE(expected);
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found.front(), *expected);
  EXPECT_GT(found.front(), 1040u);
  EXPECT_LT(found.front(), 1070u);
}

TEST(PageHinkley, ZeroThresholdFiresOnFirstPositiveDeviation) {
  sd::PageHinkley ph({.delta = 0.005, .threshold = 0.0, .alpha = 0.9999});
  EXPECT_EQ(ph.update(0.0).signal, sd::Signal::in_control);
  EXPECT_EQ(ph.update(0.0).signal, sd::Signal::in_control);
  EXPECT_EQ(ph.update(1.0).signal, sd::Signal::drift);
}

TEST(PageHinkley, ResetAfterDriftEqualsFresh) {
  sd::PageHinkley ph({.delta = 0.005, .threshold = 5.0, .alpha = 1.0});
  std::vector<double> xs(100, 0.0);
  xs.resize(200, 1.0);
  for (double x : xs)
    if (ph.update(x).signal == sd::Signal::drift) {
      EXPECT_EQ(ph.state(), sd::PageHinkley::State{});
      return;
    }
  FAIL() << "no drift";
}

TEST(PageHinkley, RejectsNonFinite) {
  sd::PageHinkley ph;
  EXPECT_THROW(ph.update(NAN), sd::InputError);
  EXPECT_THROW(ph.update(INFINITY), sd::InputError);
  EXPECT_THROW(sd::PageHinkley({.delta = 0.0}), sd::ConfigError);
}

// ---- DDM ----

TEST(Ddm, AllZeroNeverWarns) {
  sd::Ddm ddm;
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(ddm.update(0.0).signal, sd::Signal::in_control);
}

TEST(Ddm, StepMatchesOracleWithin100) {
  const auto xs = bernoulli_step(1000, 3000, 0.1, 0.9, 42);
  sd::Ddm ddm;
  const auto found = drifts(ddm, xs);
  const auto expected = ddm_oracle(xs);
  ASSERT_TRUE(expected);
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found.front(), *expected);
  EXPECT_GT(found.front(), 1000u);
  EXPECT_LE(found.front(), 1100u);
}

TEST(Ddm, HandTrace) {
  std::vector<double> xs(96, 0.0);
  xs.resize(100, 1.0);
  // Prefix minimum of p + s is 0 (p = s = 0 from i = 30 to 96), so s_min = 0 and
  // the first error at i = 97 already exceeds p_min + 3 s_min.
  sd::Ddm ddm;
  const auto found = drifts(ddm, xs);
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found.front(), 96u);
  EXPECT_EQ(ddm_oracle(xs), std::optional<std::size_t>(96));
  // At i = 100 (p = 0.04): s = sqrt(.04 * .96 / 100).
  EXPECT_NEAR(std::sqrt(0.04 * 0.96 / 100), 0.0196, 1e-4);
}

TEST(Ddm, WarningPrecedesDrift) {
  const auto xs = bernoulli_step(2000, 4000, 0.1, 0.5, 3);
  sd::Ddm ddm;
  bool warned = false;
  for (double x : xs) {
    const auto s = ddm.update(x).signal;
    if (s == sd::Signal::warning) warned = true;
    if (s == sd::Signal::drift) break;
  }
  EXPECT_TRUE(warned);
}

TEST(Ddm, ResetAfterDriftEqualsFresh) {
  const auto xs = bernoulli_step(500, 1500, 0.1, 0.9, 4);
  sd::Ddm ddm;
  for (double x : xs)
    if (ddm.update(x).signal == sd::Signal::drift) {
      EXPECT_EQ(ddm.state(), sd::Ddm::State{});
      return;
    }
  FAIL() << "no drift";
}

TEST(Ddm, RejectsNonBinary) {
  sd::Ddm ddm;
  EXPECT_THROW(ddm.update(0.5), sd::InputError);
}

// ---- EDDM ----

TEST(Eddm, RegularSpacingNeverDrifts) {
  sd::Eddm eddm;
  for (int i = 1; i <= 200000; ++i) ASSERT_NE(eddm.update(i % 100 == 0 ? 1.0 : 0.0).signal, sd::Signal::drift);
  EXPECT_DOUBLE_EQ(eddm.ratio(), 1.0);
}

TEST(Eddm, CollapsingDistancesDrift) {
  std::vector<double> xs;
  for (int e = 0; e < 50; ++e) {
    xs.insert(xs.end(), 99, 0.0);
    xs.push_back(1.0);
  }
  const std::size_t change = xs.size();
  for (int e = 0; e < 200; ++e) xs.push_back(0.0), xs.push_back(1.0);
  sd::Eddm eddm;
  const auto found = drifts(eddm, xs);
  ASSERT_FALSE(found.empty());
  EXPECT_GT(found.front(), change);
  EXPECT_LT(found.front(), change + 200);
}

TEST(Eddm, WarmUpKeepsInControl) {
  sd::Eddm eddm;
  // 29 errors with wildly varying spacing.
  for (int e = 0; e < 29; ++e) {
    for (int k = 0; k < (e % 2 ? 500 : 1); ++k) ASSERT_EQ(eddm.update(0.0).signal, sd::Signal::in_control);
    ASSERT_EQ(eddm.update(1.0).signal, sd::Signal::in_control);
  }
}

TEST(Eddm, ResetAfterDriftEqualsFresh) {
  const auto xs = bernoulli_step(3000, 6000, 0.05, 0.9, 5);
  sd::Eddm eddm;
  for (double x : xs)
    if (eddm.update(x).signal == sd::Signal::drift) {
      EXPECT_EQ(eddm.state(), sd::Eddm::State{});
      return;
    }
  FAIL() << "no drift";
}

// ---- HDDM_A ----

TEST(HddmA, StepDetectedWithin50) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sd::HddmA h;
    const auto found = drifts(h, bernoulli_step(2000, 4000, 0.1, 0.9, seed));
    ASSERT_FALSE(found.empty());
    EXPECT_GT(found.front(), 2000u) << seed;
    EXPECT_LE(found.front(), 2050u) << seed;
  }
}

TEST(HddmA, NearUnitConfidenceFiresOnFluctuation) {
  sd::HddmA h({.drift_confidence = 0.999999, .warning_confidence = 0.9999995});
  h.update(0.0);
  h.update(0.0);
  EXPECT_EQ(h.update(0.2).signal, sd::Signal::drift);
}

TEST(HddmA, ResetAndValidation) {
  sd::HddmA h;
  EXPECT_THROW(h.update(1.5), sd::InputError);
  EXPECT_THROW(h.update(-0.1), sd::InputError);
  EXPECT_THROW(sd::HddmA({.drift_confidence = 0.0}), sd::ConfigError);
  for (double x : bernoulli_step(500, 1500, 0.1, 0.9, 6))
    if (h.update(x).signal == sd::Signal::drift) {
      EXPECT_EQ(h.state(), sd::HddmA::State{});
      return;
    }
  FAIL() << "no drift";
}

// ---- HDDM_W ----

TEST(HddmW, StepDetected) {
  sd::HddmW h;
  const auto found = drifts(h, bernoulli_step(2000, 4000, 0.1, 0.9, 1));
  ASSERT_FALSE(found.empty());
  EXPECT_GT(found.front(), 2000u);
  EXPECT_LE(found.front(), 2100u);
}

TEST(HddmW, DetectsGradualRampLikeHddmA) {
  // Error rate ramps from 0.1 to 0.9 over [5000, 5500); ADI = 4 * width.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sd::Rng rng(seed);
    std::vector<double> xs(12000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double p = i < 5000 ? 0.1 : i >= 5500 ? 0.9 : 0.1 + 0.8 * (static_cast<double>(i) - 5000 + 0.5) / 500;
      xs[i] = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    sd::HddmA a;
    sd::HddmW w;
    for (sd::DriftDetector* d : {static_cast<sd::DriftDetector*>(&a), static_cast<sd::DriftDetector*>(&w)}) {
      const auto found = drifts(*d, xs);
      EXPECT_TRUE(std::any_of(found.begin(), found.end(), [](auto i) { return i > 5000 && i <= 7000; }))
          << d->name() << " seed " << seed;
    }
  }
}

TEST(HddmW, UnitLambdaIsDegenerate) {
  EXPECT_TRUE(sd::HddmW({.lambda = 1.0}).degenerate());
  EXPECT_FALSE(sd::HddmW().degenerate());
  EXPECT_THROW(sd::HddmW({.lambda = 0.0}), sd::ConfigError);
}

TEST(HddmW, ResetAfterDriftEqualsFresh) {
  sd::HddmW h;
  for (double x : bernoulli_step(500, 1500, 0.1, 0.9, 6))
    if (h.update(x).signal == sd::Signal::drift) {
      EXPECT_EQ(h.state(), sd::HddmW::State{});
      return;
    }
  FAIL() << "no drift";
}

// ---- ADWIN ----

TEST(Adwin, TotalEqualsRetainedInputs) {
  sd::Rng rng(7);
  sd::Adwin a;
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) {
    const double x = static_cast<double>(rng.below(4)) / 4.0 + (i > 10000 ? 0.5 : 0.0);
    xs.push_back(x);
    a.update(x);
    double expected = 0;
    for (std::size_t k = xs.size() - a.width(); k < xs.size(); ++k) expected += xs[k];
    ASSERT_EQ(a.state().total, expected) << i;
    double buckets = 0;
    for (const auto& row : a.state().rows)
      for (const auto& b : row) buckets += b.total;
    ASSERT_EQ(buckets, a.state().total);
  }
}

TEST(Adwin, StepDetectedAndWindowShrinks) {
  std::vector<double> xs(1000, 0.0);
  xs.resize(2000, 1.0);
  sd::Adwin a;
  ExactAdwin oracle;
  std::optional<std::size_t> first, oracle_first;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (a.update(xs[i]).signal == sd::Signal::drift && !first) first = i;
    if (oracle.update(xs[i]) && !oracle_first) oracle_first = i;
  }
  ASSERT_TRUE(first && oracle_first);
  EXPECT_GT(*first, 1000u);
  EXPECT_LT(*first, 1100u);
  EXPECT_GT(*oracle_first, 1000u);
  // Buckets only coarsen the candidate split points.
  EXPECT_GE(*first, *oracle_first);
  EXPECT_LE(*first - *oracle_first, 32u);
  EXPECT_LE(a.width(), 1000u);
  EXPECT_DOUBLE_EQ(a.mean(), 1.0);
}

TEST(Adwin, StationaryFalsePositivesBounded) {
  sd::Rng rng(2024);
  sd::Adwin a;
  int count = 0;
  for (int i = 0; i < 100000; ++i) count += a.update(rng.bernoulli(0.5) ? 1.0 : 0.0).signal == sd::Signal::drift;
  EXPECT_LE(count, 5);
}

TEST(Adwin, MemoryBound) {
  sd::Rng rng(9);
  sd::Adwin a;
  for (int i = 0; i < 50000; ++i) {
    a.update(rng.uniform());
    for (const auto& row : a.state().rows) ASSERT_LE(row.size(), 5u);
    // Rows below the top never drop under M - 1 buckets once filled, so a top
    // row r needs W >= 2^r + 4 (2^r - 1), i.e. r <= log2((W + 4) / 5).
    const double w = static_cast<double>(a.width());
    const auto rows = static_cast<std::size_t>(std::floor(std::log2(w / 5 + 1))) + 1;
    ASSERT_LE(a.state().rows.size(), rows) << i;
    ASSERT_LE(a.bucket_count(), 5 * rows) << i;
  }
}

TEST(Adwin, RejectsNonFinite) {
  sd::Adwin a;
  EXPECT_THROW(a.update(NAN), sd::InputError);
  EXPECT_THROW(sd::Adwin({.delta = 1.0}), sd::ConfigError);
}

// ---- KSWIN ----

TEST(Kswin, DisjointSupportsDrift) {
  sd::Rng rng(1);
  sd::Kswin k;
  for (int i = 0; i < 70; ++i) ASSERT_EQ(k.update(rng.normal()).signal, sd::Signal::in_control);
  for (int i = 0; i < 29; ++i) ASSERT_EQ(k.update(10 + rng.normal()).signal, sd::Signal::in_control);
  EXPECT_EQ(k.update(10 + rng.normal()).signal, sd::Signal::drift);
  EXPECT_DOUBLE_EQ(k.state().last_statistic, 1.0);
  EXPECT_LT(k.state().last_p_value, 0.005);
  EXPECT_EQ(k.state().buffer.size(), 30u);
}

TEST(Kswin, WarmUpUntilFull) {
  sd::Rng rng(2);
  sd::Kswin k;
  for (int i = 0; i < 99; ++i) ASSERT_EQ(k.update(i < 50 ? 0.0 : 100.0).signal, sd::Signal::in_control);
}

TEST(Kswin, ConfigValidation) {
  EXPECT_THROW(sd::Kswin({.window = 30, .recent = 30}), sd::ConfigError);
  EXPECT_THROW(sd::Kswin({.window = 100, .recent = 5}), sd::ConfigError);
  EXPECT_NO_THROW(sd::Kswin({.window = 50, .recent = 30, .compare_all_older = true}));
}

TEST(Kswin, BufferNeverExceedsWindow) {
  sd::Rng rng(3);
  sd::Kswin k;
  for (int i = 0; i < 5000; ++i) {
    k.update(i % 700 < 350 ? rng.normal() : 5 + rng.normal());
    ASSERT_LE(k.state().buffer.size(), 100u);
  }
}
