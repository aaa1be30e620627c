#pragma once

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// Early Drift Detection Method: tracks the distance between consecutive
/// errors. A shrinking mean + 2 std of that distance, relative to its maximum,
/// signals drift.
class Eddm final : public DriftDetector {
 public:
  struct Config {
    std::size_t warm_up_errors = 30;
    double warning_ratio = 0.95;
    double drift_ratio = 0.90;
  };
  struct State {
    std::size_t count = 0;
    std::size_t errors = 0;
    std::size_t last_error = 0;
    double mean_distance = 0.0;
    double m2 = 0.0;
    double max_level = 0.0;
    bool operator==(const State&) const = default;
  };

  Eddm() : Eddm(Config{}) {}
  explicit Eddm(const Config& config);

  const State& state() const { return state_; }
  /// Current mean + 2 std of the inter-error distance over its running maximum.
  double ratio() const { return last_ratio_; }
  std::string_view name() const override { return "eddm"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Eddm>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override {
    state_ = {};
    last_ratio_ = 1.0;
  }

 private:
  Config config_;
  State state_;
  double last_ratio_ = 1.0;
};

}  // namespace sparsedrift
