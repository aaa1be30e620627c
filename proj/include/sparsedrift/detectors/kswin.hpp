#pragma once

#include <cstdint>
#include <deque>

#include "sparsedrift/detectors/detector.hpp"
#include "sparsedrift/random.hpp"

namespace sparsedrift {

/// Kolmogorov-Smirnov windowing: a sliding window of `window` values whose
/// newest `recent` values form the current concept. Once the window is full
/// the recent values are compared with `recent` values sampled without
/// replacement from the older part; a two-sample KS p-value below alpha is a
/// drift and the window restarts from the recent values.
class Kswin final : public DriftDetector {
 public:
  struct Config {
    std::size_t window = 100;
    std::size_t recent = 30;
    double alpha = 0.005;
    std::uint64_t seed = 42;
    /// Compare against every older value instead of a subsample.
    bool compare_all_older = false;
  };
  struct State {
    std::deque<double> buffer;
    double last_statistic = 0.0;
    double last_p_value = 1.0;
    bool operator==(const State&) const = default;
  };

  Kswin() : Kswin(Config{}) {}
  explicit Kswin(const Config& config);

  const State& state() const { return state_; }
  std::string_view name() const override { return "kswin"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Kswin>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override {
    state_ = {};
    rng_ = Rng(config_.seed);
  }

 private:
  Config config_;
  State state_;
  Rng rng_;
};

}  // namespace sparsedrift
