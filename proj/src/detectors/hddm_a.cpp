#include "sparsedrift/detectors/hddm_a.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

namespace {
void check_confidence(double c, const char* what) {
  if (!(c > 0.0 && c < 1.0)) throw ConfigError(std::string("hddm: ") + what + " must be in (0,1)");
}
}  // namespace

HddmA::HddmA(const Config& config) : config_(config) {
  check_confidence(config.drift_confidence, "drift_confidence");
  check_confidence(config.warning_confidence, "warning_confidence");
}

bool HddmA::mean_increased(double confidence) const {
  const auto& s = state_;
  if (s.cut_n == s.n) return false;
  const double n = static_cast<double>(s.n);
  const double cut_n = static_cast<double>(s.cut_n);
  // Hoeffding bound for the difference between the prefix mean and the overall mean.
  const double m = (n - cut_n) / (cut_n * n);
  const double bound = std::sqrt(0.5 * m * std::log(1.0 / confidence));
  return s.total / n - s.cut_total / cut_n >= bound;
}

Signal HddmA::step(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("hddm_a: observation must be in [0,1]");
  auto& s = state_;
  ++s.n;
  s.total += x;
  if (s.cut_n == 0) {
    s.cut_n = s.n;
    s.cut_total = s.total;
  }
  const double log_term = std::log(1.0 / config_.drift_confidence);
  const double cut_upper = s.cut_total / static_cast<double>(s.cut_n) +
                           std::sqrt(log_term / (2.0 * static_cast<double>(s.cut_n)));
  const double total_upper = s.total / static_cast<double>(s.n) +
                             std::sqrt(log_term / (2.0 * static_cast<double>(s.n)));
  if (cut_upper >= total_upper) {
    s.cut_n = s.n;
    s.cut_total = s.total;
  }
  if (mean_increased(config_.drift_confidence)) {
    reset_state();
    return Signal::drift;
  }
  if (mean_increased(config_.warning_confidence)) return Signal::warning;
  return Signal::in_control;
}

}  // namespace sparsedrift
