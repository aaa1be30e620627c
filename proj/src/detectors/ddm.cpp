#include "sparsedrift/detectors/ddm.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

Ddm::Ddm(const Config& config) : config_(config) {
  if (config.warning_level <= 0.0 || config.drift_level < config.warning_level)
    throw ConfigError("ddm: need 0 < warning_level <= drift_level");
}

Signal Ddm::step(double x) {
  if (x != 0.0 && x != 1.0) throw InputError("ddm: observation must be 0 or 1");
  auto& s = state_;
  ++s.count;
  const double i = static_cast<double>(s.count);
  s.p += (x - s.p) / i;
  s.s = std::sqrt(s.p * (1.0 - s.p) / i);
  if (s.count < config_.warm_up) return Signal::in_control;

  if (s.p + s.s <= s.ps_min) {
    s.p_min = s.p;
    s.s_min = s.s;
    s.ps_min = s.p + s.s;
  }
  if (s.p + s.s > s.p_min + config_.drift_level * s.s_min) {
    reset_state();
    return Signal::drift;
  }
  if (s.p + s.s > s.p_min + config_.warning_level * s.s_min) return Signal::warning;
  return Signal::in_control;
}

}  // namespace sparsedrift
