#pragma once

#include <limits>

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// Hoeffding/McDiarmid-bound drift detector on exponentially weighted moving
/// averages (W-test, one-sided increase).
class HddmW final : public DriftDetector {
 public:
  struct Config {
    double lambda = 0.05;
    double drift_confidence = 0.001;
    double warning_confidence = 0.005;
  };
  /// EWMA estimate plus the sum of squared weights that bounds its deviation.
  struct Estimate {
    bool empty = true;
    double ewma = 0.0;
    double weight_sq = 0.0;
    bool operator==(const Estimate&) const = default;
  };
  struct State {
    Estimate total;
    Estimate cut;
    Estimate recent;
    double cut_bound = std::numeric_limits<double>::infinity();
    bool operator==(const State&) const = default;
  };

  HddmW() : HddmW(Config{}) {}
  explicit HddmW(const Config& config);

  const State& state() const { return state_; }
  /// lambda = 1 collapses every estimate to the latest observation.
  bool degenerate() const { return config_.lambda == 1.0; }
  std::string_view name() const override { return "hddm_w"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<HddmW>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override { state_ = {}; }

 private:
  void add(Estimate& e, double x) const;
  bool mean_increased(double confidence) const;

  Config config_;
  State state_;
};

}  // namespace sparsedrift
