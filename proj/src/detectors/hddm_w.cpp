#include "sparsedrift/detectors/hddm_w.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

HddmW::HddmW(const Config& config) : config_(config) {
  if (!(config.lambda > 0.0 && config.lambda <= 1.0)) throw ConfigError("hddm_w: lambda must be in (0,1]");
  if (!(config.drift_confidence > 0.0 && config.drift_confidence < 1.0) ||
      !(config.warning_confidence > 0.0 && config.warning_confidence < 1.0))
    throw ConfigError("hddm_w: confidences must be in (0,1)");
}

void HddmW::add(Estimate& e, double x) const {
  const double decay = 1.0 - config_.lambda;
  if (e.empty) {
    e = {false, x, 1.0};
    return;
  }
  e.ewma = config_.lambda * x + decay * e.ewma;
  e.weight_sq = config_.lambda * config_.lambda + decay * decay * e.weight_sq;
}

bool HddmW::mean_increased(double confidence) const {
  const auto& cut = state_.cut;
  const auto& recent = state_.recent;
  if (cut.empty || recent.empty) return false;
  const double bound = std::sqrt((cut.weight_sq + recent.weight_sq) * std::log(1.0 / confidence) / 2.0);
  return recent.ewma - cut.ewma > bound;
}

Signal HddmW::step(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("hddm_w: observation must be in [0,1]");
  auto& s = state_;
  add(s.total, x);

  const double eps = std::sqrt(s.total.weight_sq * std::log(1.0 / config_.drift_confidence) / 2.0);
  const double cut_level = s.cut.empty ? std::numeric_limits<double>::infinity() : s.cut.ewma + s.cut_bound;
  if (s.total.ewma + eps < cut_level) {
    s.cut_bound = eps;
    s.cut = s.total;
    s.recent = {};
  } else {
    add(s.recent, x);
  }

  if (mean_increased(config_.drift_confidence)) {
    reset_state();
    return Signal::drift;
  }
  if (mean_increased(config_.warning_confidence)) return Signal::warning;
  return Signal::in_control;
}

}  // namespace sparsedrift
