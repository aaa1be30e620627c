#include "sparsedrift/detectors/page_hinkley.hpp"

#include <algorithm>
#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

PageHinkley::PageHinkley(const Config& config) : config_(config) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw ConfigError("page_hinkley: delta must be in (0,1)");
  if (!(config.threshold >= 0.0)) throw ConfigError("page_hinkley: threshold must be >= 0");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw ConfigError("page_hinkley: alpha must be in (0,1]");
}

Signal PageHinkley::step(double x) {
  if (!std::isfinite(x)) throw InputError("page_hinkley: non-finite observation");
  auto& s = state_;
  ++s.count;
  s.mean += (x - s.mean) / static_cast<double>(s.count);
  s.sum = config_.alpha * s.sum + (x - s.mean - config_.delta);
  s.min_sum = s.count == 1 ? s.sum : std::min(s.min_sum, s.sum);
  if (s.sum - s.min_sum > config_.threshold) {
    reset_state();
    return Signal::drift;
  }
  return Signal::in_control;
}

}  // namespace sparsedrift
