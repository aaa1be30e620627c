#include "sparsedrift/detectors/eddm.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

Eddm::Eddm(const Config& config) : config_(config) {
  if (!(config.drift_ratio > 0.0 && config.drift_ratio <= config.warning_ratio && config.warning_ratio < 1.0))
    throw ConfigError("eddm: need 0 < drift_ratio <= warning_ratio < 1");
}

Signal Eddm::step(double x) {
  if (x != 0.0 && x != 1.0) throw InputError("eddm: observation must be 0 or 1");
  auto& s = state_;
  ++s.count;
  if (x == 0.0) return Signal::in_control;

  ++s.errors;
  const double distance = static_cast<double>(s.count - s.last_error);
  s.last_error = s.count;
  const double previous_mean = s.mean_distance;
  s.mean_distance += (distance - s.mean_distance) / static_cast<double>(s.errors);
  s.m2 += (distance - previous_mean) * (distance - s.mean_distance);
  if (s.errors < config_.warm_up_errors) return Signal::in_control;

  const double level = s.mean_distance + 2.0 * std::sqrt(s.m2 / static_cast<double>(s.errors));
  if (level > s.max_level) {
    s.max_level = level;
    last_ratio_ = 1.0;
    return Signal::in_control;
  }
  last_ratio_ = level / s.max_level;
  if (last_ratio_ < config_.drift_ratio) {
    reset_state();
    return Signal::drift;
  }
  if (last_ratio_ < config_.warning_ratio) return Signal::warning;
  return Signal::in_control;
}

}  // namespace sparsedrift
