#include "sparsedrift/detectors/adwin.hpp"

#include <cmath>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

Adwin::Adwin(const Config& config) : config_(config) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw ConfigError("adwin: delta must be in (0,1)");
  if (config.max_buckets < 2) throw ConfigError("adwin: max_buckets must be >= 2");
  if (config.min_sub_window < 1) throw ConfigError("adwin: min_sub_window must be >= 1");
  if (config.clock < 1) throw ConfigError("adwin: clock must be >= 1");
}

std::size_t Adwin::bucket_count() const {
  std::size_t count = 0;
  for (const auto& row : state_.rows) count += row.size();
  return count;
}

void Adwin::insert(double x) {
  auto& s = state_;
  if (s.rows.empty()) s.rows.emplace_back();
  s.rows[0].push_back({x, 0.0});
  const double previous_mean = s.width ? s.total / static_cast<double>(s.width) : 0.0;
  ++s.width;
  if (s.width > 1) {
    const double w = static_cast<double>(s.width);
    s.variance += (w - 1.0) * (x - previous_mean) * (x - previous_mean) / w;
  }
  s.total += x;
  compress();
}

void Adwin::compress() {
  auto& rows = state_.rows;
  for (std::size_t level = 0; level < rows.size(); ++level) {
    if (rows[level].size() <= config_.max_buckets) break;
    const double n = std::ldexp(1.0, static_cast<int>(level));
    const Bucket a = rows[level].front();
    rows[level].pop_front();
    const Bucket b = rows[level].front();
    rows[level].pop_front();
    const double diff = a.total / n - b.total / n;
    const Bucket merged{a.total + b.total, a.variance + b.variance + n * n / (2.0 * n) * diff * diff};
    if (level + 1 == rows.size()) rows.emplace_back();
    rows[level + 1].push_back(merged);
  }
}

void Adwin::drop_oldest() {
  auto& s = state_;
  std::size_t level = s.rows.size();
  while (level > 0 && s.rows[level - 1].empty()) --level;
  if (level == 0) return;
  --level;
  const Bucket oldest = s.rows[level].front();
  s.rows[level].pop_front();
  const double n1 = std::ldexp(1.0, static_cast<int>(level));
  const double u1 = oldest.total / n1;
  s.width -= static_cast<std::size_t>(n1);
  s.total -= oldest.total;
  const double w = static_cast<double>(s.width);
  if (s.width == 0) {
    s.variance = 0.0;
  } else {
    const double diff = u1 - s.total / w;
    s.variance -= oldest.variance + n1 * w * diff * diff / (n1 + w);
    if (s.variance < 0.0) s.variance = 0.0;
  }
  while (!s.rows.empty() && s.rows.back().empty()) s.rows.pop_back();
}

bool Adwin::cut(double n0, double n1, double mean_diff) const {
  const double w = static_cast<double>(state_.width);
  const double dd = std::log(2.0 * std::log(w) / config_.delta);
  const double lead = static_cast<double>(config_.min_sub_window);
  const double m = 1.0 / (n0 - lead + 1.0) + 1.0 / (n1 - lead + 1.0);
  const double eps = std::sqrt(2.0 * m * (state_.variance / w) * dd) + 2.0 / 3.0 * dd * m;
  return std::fabs(mean_diff) > eps;
}

bool Adwin::shrink_on_cut() {
  bool changed = false;
  bool again = true;
  while (again && state_.width > config_.min_window) {
    again = false;
    double n0 = 0.0;
    double u0 = 0.0;
    const double n = static_cast<double>(state_.width);
    for (std::size_t level = state_.rows.size(); level-- > 0 && !again;) {
      const double size = std::ldexp(1.0, static_cast<int>(level));
      for (const Bucket& b : state_.rows[level]) {
        n0 += size;
        u0 += b.total;
        const double n1 = n - n0;
        if (n1 < 1.0) break;
        const double u1 = state_.total - u0;
        const double lead = static_cast<double>(config_.min_sub_window);
        if (n0 > lead && n1 > lead && cut(n0, n1, u0 / n0 - u1 / n1)) {
          again = true;
          changed = true;
          drop_oldest();
          break;
        }
      }
    }
  }
  return changed;
}

Signal Adwin::step(double x) {
  if (!std::isfinite(x)) throw InputError("adwin: non-finite observation");
  insert(x);
  if (++state_.ticks % config_.clock != 0) return Signal::in_control;
  return shrink_on_cut() ? Signal::drift : Signal::in_control;
}

}  // namespace sparsedrift
