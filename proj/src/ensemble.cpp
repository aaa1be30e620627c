#include "sparsedrift/ensemble.hpp"

#include <cctype>
#include <cmath>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/stats.hpp"

namespace sparsedrift {

std::string to_string(EnsemblePreset preset) {
  switch (preset) {
    case EnsemblePreset::abrupt: return "abrupt";
    case EnsemblePreset::gradual: return "gradual";
    case EnsemblePreset::custom: return "custom";
  }
  return "?";
}

EnsemblePreset parse_ensemble_preset(std::string_view text) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "abrupt") return EnsemblePreset::abrupt;
  if (lower == "gradual") return EnsemblePreset::gradual;
  if (lower == "custom") return EnsemblePreset::custom;
  throw ConfigError("unknown ensemble preset '" + std::string(text) + "'");
}

EnsembleConfig EnsembleConfig::abrupt(std::size_t window) {
  EnsembleConfig config;
  config.members = {DetectorKind::adwin, DetectorKind::hddm_a, DetectorKind::kswin};
  config.window = window;
  return config;
}

EnsembleConfig EnsembleConfig::gradual(std::size_t window) {
  EnsembleConfig config;
  config.members = {DetectorKind::hddm_a, DetectorKind::hddm_w, DetectorKind::page_hinkley};
  config.window = window;
  return config;
}

EnsembleConfig EnsembleConfig::preset(EnsemblePreset preset, std::size_t window) {
  switch (preset) {
    case EnsemblePreset::abrupt: return abrupt(window);
    case EnsemblePreset::gradual: return gradual(window);
    case EnsemblePreset::custom: break;
  }
  throw ConfigError("custom ensemble needs an explicit member list");
}

void EnsembleConfig::validate() const {
  if (members.size() < 2) throw ConfigError("ensemble needs at least two members");
  if (members.size() > 32) throw ConfigError("ensemble supports at most 32 members");
  if (window < 1) throw ConfigError("vote window must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("ensemble threshold must be in [0,1]");
}

double ensemble_score(std::span<const int> votes) {
  if (votes.empty()) throw ConfigError("ensemble_score: empty vote list");
  double sum = 0.0;
  for (int v : votes) {
    if (v != 1 && v != -1) throw InputError("ensemble_score: votes must be +1 or -1");
    sum += v;
  }
  return sum / static_cast<double>(votes.size());
}

std::string to_string(Decision decision) {
  switch (decision) {
    case Decision::negative: return "-1";
    case Decision::reject: return "reject";
    case Decision::positive: return "+1";
  }
  return "?";
}

Decision decide(double phi, double t) {
  if (!(t >= 0.0)) throw ConfigError("decide: threshold must be >= 0");
  if (phi >= t) return Decision::positive;
  if (phi <= -t) return Decision::negative;
  return Decision::reject;
}

std::size_t quorum(std::size_t members) { return (members + 2) / 2; }

VoteWindow::VoteWindow(std::size_t members, std::size_t window, double threshold)
    : window_(window), threshold_(threshold), firings_(members) {
  if (members == 0) throw ConfigError("vote window needs members");
  if (window == 0) throw ConfigError("vote window must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("ensemble threshold must be in [0,1]");
}

void VoteWindow::reset() {
  for (auto& f : firings_) f.reset();
  last_index_.reset();
  suppressed_until_ = 0;
}

EnsembleOutput VoteWindow::update(std::span<const DetectorOutput> outputs) {
  if (outputs.size() != firings_.size()) throw SequencingError("member output count does not match the ensemble");
  const std::size_t i = outputs.front().index;
  for (const auto& out : outputs)
    if (out.index != i) throw SequencingError("member outputs are not aligned on one instance index");
  if (last_index_ && i <= *last_index_) throw SequencingError("instance indices must increase");
  last_index_ = i;

  EnsembleOutput result;
  result.index = i;
  std::vector<int> votes(firings_.size(), -1);
  std::size_t active = 0;
  for (std::size_t m = 0; m < firings_.size(); ++m) {
    if (outputs[m].signal == Signal::drift && i >= suppressed_until_) firings_[m] = i;
    if (firings_[m] && *firings_[m] + window_ > i) {
      votes[m] = 1;
      result.active |= std::uint32_t{1} << m;
      ++active;
    }
  }
  result.score = ensemble_score(votes);
  result.decision = decide(result.score, threshold_);
  result.drift = active >= quorum(firings_.size()) && result.decision == Decision::positive;
  if (result.drift) {
    for (auto& f : firings_) f.reset();
    suppressed_until_ = i + window_;
  }
  return result;
}

EnsembleDetector::EnsembleDetector(const EnsembleConfig& config)
    : config_(config), votes_((config.validate(), config.members.size()), config.window, config.threshold) {
  for (auto kind : config_.members) members_.push_back(make_detector(kind, config_.detectors));
  member_outputs_.resize(members_.size());
}

EnsembleDetector::EnsembleDetector(const EnsembleDetector& other)
    : DriftDetector(other),
      config_(other.config_),
      votes_(other.votes_),
      member_outputs_(other.member_outputs_),
      last_(other.last_) {
  for (const auto& m : other.members_) members_.push_back(m->clone());
}

std::unique_ptr<DriftDetector> EnsembleDetector::clone() const {
  return std::make_unique<EnsembleDetector>(*this);
}

Signal EnsembleDetector::step(double x) {
  for (std::size_t m = 0; m < members_.size(); ++m) member_outputs_[m] = members_[m]->update(x);
  last_ = votes_.update(member_outputs_);
  return last_.drift ? Signal::drift : Signal::in_control;
}

void EnsembleDetector::reset_state() {
  for (auto& m : members_) m->reset();
  votes_.reset();
  member_outputs_.assign(members_.size(), {});
  last_ = {};
}

RiskBound risk_upper_bound(const RiskParams& p) {
  if (!(p.mu_z > -1.0 && p.mu_z < 1.0)) throw ParameterError("risk bound: mu_z must be in (-1,1)");
  if (!(p.rho_bar >= 0.0 && p.rho_bar <= 1.0)) throw ParameterError("risk bound: rho_bar must be in [0,1]");
  if (!(p.c1 >= p.c2 && p.c2 >= 0.0)) throw ParameterError("risk bound: need c1 >= c2 >= 0");
  if (!(p.t >= 0.0)) throw ParameterError("risk bound: threshold must be >= 0");
  if (!(p.mu_z > p.t)) throw ParameterError("risk bound: requires mu_z > t");
  if (p.rho_bar == 0.0) return {0.0, true};
  const double spread = p.rho_bar * (1.0 - p.mu_z * p.mu_z);
  const double plus = p.mu_z + p.t;
  const double minus = p.mu_z - p.t;
  const double value = (p.c1 - p.c2) / (1.0 + plus * plus / spread) + p.c2 / (1.0 + minus * minus / spread);
  return {value, false};
}

EmpiricalRisk empirical_risk(std::span<const double> z, double t, double c1, double c2) {
  if (z.empty()) throw InputError("empirical_risk: empty trace");
  if (!(t >= 0.0)) throw ParameterError("empirical_risk: threshold must be >= 0");
  std::size_t errors = 0;
  std::size_t rejects = 0;
  for (double v : z) {
    if (!(v >= -1.0 && v <= 1.0)) throw InputError("empirical_risk: z outside [-1,1]");
    if (v >= t) continue;
    if (v <= -t)
      ++errors;
    else
      ++rejects;
  }
  const double n = static_cast<double>(z.size());
  EmpiricalRisk r;
  r.p_error = static_cast<double>(errors) / n;
  r.p_reject = static_cast<double>(rejects) / n;
  r.p_accept = static_cast<double>(z.size() - errors - rejects) / n;
  r.risk = c1 * r.p_error + c2 * r.p_reject;
  return r;
}

CorrelationSummary pairwise_correlation(const std::vector<std::vector<double>>& histories) {
  if (histories.size() < 2) throw ConfigError("pairwise_correlation: need at least two histories");
  for (const auto& h : histories)
    if (h.size() != histories.front().size()) throw InputError("pairwise_correlation: unequal history lengths");
  CorrelationSummary summary;
  double sum = 0.0;
  for (std::size_t a = 0; a < histories.size(); ++a) {
    for (std::size_t b = a + 1; b < histories.size(); ++b) {
      if (auto r = stats::pearson(histories[a], histories[b])) {
        sum += *r;
        ++summary.pairs_used;
      } else {
        ++summary.pairs_excluded;
      }
    }
  }
  if (summary.pairs_used) summary.mean = sum / static_cast<double>(summary.pairs_used);
  return summary;
}

}  // namespace sparsedrift
