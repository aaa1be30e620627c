#pragma once

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// Hoeffding-bound drift detector on moving averages (A-test, one-sided:
/// detects increases of the mean of a [0,1] stream).
class HddmA final : public DriftDetector {
 public:
  struct Config {
    double drift_confidence = 0.001;
    double warning_confidence = 0.005;
  };
  struct State {
    std::size_t n = 0;
    double total = 0.0;
    /// Prefix that minimises the upper Hoeffding bound of the mean.
    std::size_t cut_n = 0;
    double cut_total = 0.0;
    bool operator==(const State&) const = default;
  };

  HddmA() : HddmA(Config{}) {}
  explicit HddmA(const Config& config);

  const State& state() const { return state_; }
  std::string_view name() const override { return "hddm_a"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<HddmA>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override { state_ = {}; }

 private:
  bool mean_increased(double confidence) const;

  Config config_;
  State state_;
};

}  // namespace sparsedrift
