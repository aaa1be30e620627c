#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "sparsedrift/types.hpp"

namespace sparsedrift {

struct DetectorOutput {
  Signal signal = Signal::in_control;
  std::size_t index = 0;
};

/// Online drift detector over a scalar stream (typically the 0/1 error bit).
///
/// A detector that emits Signal::drift has already reset itself when update()
/// returns. Indices count every observation since construction and survive resets.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;

  DetectorOutput update(double x) { return {step(x), next_index_++}; }
  /// Back to the freshly constructed state (the index counter included).
  void reset() {
    reset_state();
    next_index_ = 0;
  }
  std::size_t instances_seen() const { return next_index_; }

  virtual std::string_view name() const = 0;
  virtual std::unique_ptr<DriftDetector> clone() const = 0;

 protected:
  virtual Signal step(double x) = 0;
  virtual void reset_state() = 0;

 private:
  std::size_t next_index_ = 0;
};

/// Never signals; the no-detector baseline.
class NullDetector final : public DriftDetector {
 public:
  std::string_view name() const override { return "none"; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<NullDetector>(*this); }

 protected:
  Signal step(double) override { return Signal::in_control; }
  void reset_state() override {}
};

}  // namespace sparsedrift
