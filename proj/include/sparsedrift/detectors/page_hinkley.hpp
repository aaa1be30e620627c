#pragma once

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// Page-Hinkley test for an increase of the mean.
class PageHinkley final : public DriftDetector {
 public:
  struct Config {
    double delta = 0.005;
    double threshold = 50.0;
    /// Forgetting factor applied to the cumulative statistic.
    double alpha = 0.9999;
  };
  struct State {
    std::size_t count = 0;
    double mean = 0.0;
    double sum = 0.0;
    double min_sum = 0.0;
    bool operator==(const State&) const = default;
  };

  PageHinkley() : PageHinkley(Config{}) {}
  explicit PageHinkley(const Config& config);

  const State& state() const { return state_; }
  const Config& config() const { return config_; }
  std::string_view name() const override { return "page_hinkley"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<PageHinkley>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override { state_ = {}; }

 private:
  Config config_;
  State state_;
};

}  // namespace sparsedrift
