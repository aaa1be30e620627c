#include "sparsedrift/detectors/kswin.hpp"

#include <cmath>
#include <vector>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/stats.hpp"

namespace sparsedrift {

Kswin::Kswin(const Config& config) : config_(config), rng_(config.seed) {
  if (config.recent < 10) throw ConfigError("kswin: recent must be >= 10");
  if (config.recent >= config.window) throw ConfigError("kswin: recent must be smaller than window");
  if (!config.compare_all_older && config.window - config.recent < config.recent)
    throw ConfigError("kswin: older part must hold at least `recent` values to subsample");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("kswin: alpha must be in (0,1)");
}

Signal Kswin::step(double x) {
  if (!std::isfinite(x)) throw InputError("kswin: non-finite observation");
  auto& buffer = state_.buffer;
  buffer.push_back(x);
  if (buffer.size() > config_.window) buffer.pop_front();
  if (buffer.size() < config_.window) return Signal::in_control;

  const std::size_t older = config_.window - config_.recent;
  std::vector<double> recent(buffer.begin() + static_cast<std::ptrdiff_t>(older), buffer.end());
  std::vector<double> reference;
  if (config_.compare_all_older) {
    reference.assign(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(older));
  } else {
    reference.reserve(config_.recent);
    for (std::size_t idx : rng_.sample_without_replacement(older, config_.recent)) reference.push_back(buffer[idx]);
  }
  state_.last_statistic = stats::ks_two_sample_statistic(reference, recent);
  state_.last_p_value = stats::ks_two_sample_p_value(state_.last_statistic, reference.size(), recent.size());
  if (state_.last_p_value < config_.alpha) {
    buffer.erase(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(older));
    return Signal::drift;
  }
  return Signal::in_control;
}

}  // namespace sparsedrift
