#pragma once

#include <limits>

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// Drift Detection Method: monitors the running error rate p and its standard
/// deviation s = sqrt(p (1 - p) / i) against the minimum of p + s seen so far.
class Ddm final : public DriftDetector {
 public:
  struct Config {
    std::size_t warm_up = 30;
    double warning_level = 2.0;
    double drift_level = 3.0;
  };
  struct State {
    std::size_t count = 0;
    double p = 0.0;
    double s = 0.0;
    double p_min = std::numeric_limits<double>::infinity();
    double s_min = std::numeric_limits<double>::infinity();
    double ps_min = std::numeric_limits<double>::infinity();
    bool operator==(const State&) const = default;
  };

  Ddm() : Ddm(Config{}) {}
  explicit Ddm(const Config& config);

  const State& state() const { return state_; }
  std::string_view name() const override { return "ddm"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Ddm>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override { state_ = {}; }

 private:
  Config config_;
  State state_;
};

}  // namespace sparsedrift
