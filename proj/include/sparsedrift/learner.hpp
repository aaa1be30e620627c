#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sparsedrift {

/// Incremental binary classifier.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::uint8_t predict(std::span<const double> features) const = 0;
  virtual void update(std::span<const double> features, std::uint8_t label) = 0;
  /// Back to the untrained state.
  virtual void reset() = 0;
  virtual std::unique_ptr<Learner> clone() const = 0;
};

/// Online Gaussian naive Bayes with Laplace-smoothed class priors.
class GaussianNaiveBayes final : public Learner {
 public:
  struct Config {
    /// Returned before any training.
    std::uint8_t prior_label = 0;
    double variance_floor = 1e-9;
  };
  struct ClassStats {
    std::size_t count = 0;
    std::vector<double> mean;
    /// Sum of squared deviations (Welford).
    std::vector<double> m2;
  };

  GaussianNaiveBayes() : GaussianNaiveBayes(Config{}) {}
  explicit GaussianNaiveBayes(const Config& config) : config_(config) {}

  std::uint8_t predict(std::span<const double> features) const override;
  void update(std::span<const double> features, std::uint8_t label) override;
  void reset() override;
  std::unique_ptr<Learner> clone() const override { return std::make_unique<GaussianNaiveBayes>(*this); }

  /// Log joint density log P(c) + sum_j log N(x_j; mu_cj, var_cj); -inf for an unseen class.
  double log_joint(std::span<const double> features, std::uint8_t label) const;
  const ClassStats& stats(std::uint8_t label) const { return classes_.at(label); }
  double variance(std::uint8_t label, std::size_t feature) const;

 private:
  void check(std::span<const double> features) const;

  Config config_;
  std::array<ClassStats, 2> classes_;
  std::size_t dimension_ = 0;
};

}  // namespace sparsedrift
