#pragma once

#include <deque>
#include <vector>

#include "sparsedrift/detectors/detector.hpp"

namespace sparsedrift {

/// ADWIN2: adaptive window over an exponential histogram of buckets.
///
/// Row r holds buckets of 2^r observations, oldest first; when a row exceeds
/// max_buckets its two oldest buckets merge into row r + 1. After each
/// insertion every bucket boundary splits the window into an older part W0
/// and a newer part W1, and a drift is declared when
///   |mean(W0) - mean(W1)| > sqrt(2 m var ln(2 ln|W| / delta)) + 2/3 m ln(2 ln|W| / delta)
/// with m = 1/(n0 - L + 1) + 1/(n1 - L + 1), L = min_sub_window. Oldest
/// buckets are then dropped until no split fires.
class Adwin final : public DriftDetector {
 public:
  struct Config {
    double delta = 0.002;
    std::size_t max_buckets = 5;
    std::size_t min_sub_window = 5;
    /// Window must exceed this length before cuts are checked.
    std::size_t min_window = 10;
    /// Check for cuts every `clock` insertions (1 = every instance).
    std::size_t clock = 1;
  };
  struct Bucket {
    double total = 0.0;
    /// Sum of squared deviations from the bucket mean.
    double variance = 0.0;
    bool operator==(const Bucket&) const = default;
  };
  struct State {
    std::vector<std::deque<Bucket>> rows;
    std::size_t width = 0;
    double total = 0.0;
    double variance = 0.0;
    std::size_t ticks = 0;
    bool operator==(const State&) const = default;
  };

  Adwin() : Adwin(Config{}) {}
  explicit Adwin(const Config& config);

  const State& state() const { return state_; }
  std::size_t width() const { return state_.width; }
  double mean() const { return state_.width ? state_.total / static_cast<double>(state_.width) : 0.0; }
  std::size_t bucket_count() const;
  std::string_view name() const override { return "adwin"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Adwin>(*this); }

 protected:
  Signal step(double x) override;
  void reset_state() override { state_ = {}; }

 private:
  void insert(double x);
  void compress();
  bool shrink_on_cut();
  void drop_oldest();
  bool cut(double n0, double n1, double mean_diff) const;

  Config config_;
  State state_;
};

}  // namespace sparsedrift
