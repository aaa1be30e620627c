#include "sparsedrift/reports.hpp"

#include <bit>
#include <fstream>
#include <ostream>
#include <variant>

#include "sparsedrift/csv.hpp"
#include "sparsedrift/errors.hpp"

namespace sparsedrift {

namespace {

template <class T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

RiskReport risk_report(const RunTrace& trace, std::size_t members, std::size_t adi_floor, double c1,
                       double c2, double t) {
  if (trace.ensemble_scores.size() != trace.size())
    throw SpecError("risk_report: trace was not produced by an ensemble detector");
  const std::size_t n = trace.size();
  std::vector<double> y(n, -1.0);
  const auto& drift = trace.drift;
  for (std::size_t k = 0; k < drift.positions.size(); ++k) {
    const std::size_t p = drift.positions[k];
    const std::size_t adi = std::max(4 * drift.width(k), adi_floor);
    for (std::size_t i = p + 1; i <= p + adi && i < n; ++i) y[i] = 1.0;
  }
  std::vector<double> z(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = y[i] * trace.ensemble_scores[i];
    sum += z[i];
  }

  RiskReport report;
  report.mu_z = n ? sum / static_cast<double>(n) : 0.0;
  report.empirical = empirical_risk(z, t, c1, c2);

  std::vector<std::vector<double>> votes(members, std::vector<double>(n, -1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < members; ++m)
      if (trace.ensemble_active[i] >> m & 1u) votes[m][i] = 1.0;
  report.correlation = pairwise_correlation(votes);

  report.params = {report.mu_z, report.correlation.mean.value_or(0.0), c1, c2, t};
  if (!report.correlation.mean) {
    report.bound_note = "every member vote history is constant";
  } else if (*report.correlation.mean < 0.0) {
    report.bound_note = "negative average correlation";
  } else if (!(report.mu_z > t)) {
    report.bound_note = "mu_z <= t";
  } else {
    report.bound = risk_upper_bound(report.params);
  }
  return report;
}

Json to_json(const DistributionSpec& spec) {
  Json j;
  j["family"] = to_string(family_of(spec));
  std::visit(
      [&j](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          j["mean"] = d.mean;
          j["stddev"] = d.stddev;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          j["lower"] = d.lower;
          j["upper"] = d.upper;
        } else if constexpr (std::is_same_v<T, ChiSquared>) {
          j["dof"] = d.dof;
        } else if constexpr (std::is_same_v<T, Cauchy>) {
          j["location"] = d.location;
          j["scale"] = d.scale;
        } else if constexpr (std::is_same_v<T, Binomial>) {
          j["trials"] = d.trials;
          j["probability"] = d.probability;
        } else {
          j["mean"] = std::vector<double>(d.mean.data(), d.mean.data() + d.mean.size());
          Json rows = Json::array();
          for (Eigen::Index r = 0; r < d.covariance.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < d.covariance.cols(); ++c) row.push_back(d.covariance(r, c));
            rows.push_back(row);
          }
          j["covariance"] = rows;
        }
      },
      spec);
  return j;
}

Json to_json(const RunsTestResult& r) {
  Json j;
  j["runs"] = r.runs;
  j["n_observed"] = r.n_observed;
  j["n_missing"] = r.n_missing;
  j["expected_runs"] = r.expected_runs;
  j["variance"] = r.variance;
  j["z"] = optional_json(r.z);
  j["p_value"] = optional_json(r.p_value);
  j["degenerate"] = r.degenerate;
  j["short_sequence"] = r.short_sequence;
  return j;
}

Json to_json(const MissingnessVerdict& verdict) {
  Json features = Json::array();
  for (const auto& f : verdict.features) {
    Json j;
    j["feature"] = f.feature;
    j["sparsity"] = f.sparsity;
    j["mechanism"] = f.mechanism ? Json(to_string(*f.mechanism)) : Json(nullptr);
    j["evidence"] = to_json(f.evidence);
    j["uncorrelated_with_observed"] = optional_json(f.uncorrelated_with_observed);
    features.push_back(j);
  }
  Json j;
  j["features"] = features;
  return j;
}

Json to_json(const ImputationBiasReport& report) {
  Json features = Json::array();
  for (const auto& f : report.features) {
    Json j;
    j["feature"] = f.feature;
    j["e1_hat"] = optional_json(f.e1_hat);
    j["e2_hat"] = f.e2_hat;
    j["w1"] = f.w1;
    j["w2"] = f.w2;
    j["bias"] = optional_json(f.bias);
    features.push_back(j);
  }
  Json j;
  j["features"] = features;
  return j;
}

Json to_json(const SelectionReport& report) {
  Json candidates = Json::array();
  for (const auto& c : report.candidates) {
    Json j;
    j["method"] = c.method.name();
    j["rmse"] = std::isfinite(c.rmse) ? Json(c.rmse) : Json(nullptr);
    candidates.push_back(j);
  }
  Json j;
  j["winner"] = report.winner.name();
  j["used_default"] = report.used_default;
  j["masked_cells"] = report.masked_cells;
  j["complete_rows"] = report.complete_rows;
  j["candidates"] = candidates;
  return j;
}

Json to_json(const DistributionFit& fit) {
  Json ranking = Json::array();
  for (const auto& s : fit.ranking) {
    Json j;
    j["family"] = to_string(s.family);
    j["ks_distance"] = s.ks_distance;
    ranking.push_back(j);
  }
  Json j;
  j["fitted"] = to_json(fit.fitted);
  j["fit_statistic"] = fit.fit_statistic;
  j["low_confidence"] = fit.low_confidence;
  j["ranking"] = ranking;
  return j;
}

Json to_json(const DetectionMetrics& m) {
  Json j;
  j["add"] = optional_json(m.add);
  j["tpr"] = m.tpr;
  j["tpd"] = optional_json(m.tpd);
  j["drift_count"] = m.drift_count;
  j["detections"] = m.detections;
  j["true_detections"] = m.true_detections;
  j["adi"] = m.adi;
  return j;
}

Json to_json(const MetricsReport& report) {
  Json j;
  j["accuracy"] = report.accuracy;
  j["final_prequential_error"] = report.prequential_error.empty() ? 0.0 : report.prequential_error.back();
  const Json detection = to_json(report.detection);
  for (const auto& [key, value] : detection.items()) j[key] = value;
  return j;
}

Json to_json(const RiskReport& r) {
  Json j;
  j["mu_z"] = r.mu_z;
  j["rho_bar"] = optional_json(r.correlation.mean);
  j["pairs_used"] = r.correlation.pairs_used;
  j["pairs_excluded"] = r.correlation.pairs_excluded;
  j["t"] = r.params.t;
  j["c1"] = r.params.c1;
  j["c2"] = r.params.c2;
  j["p_error"] = r.empirical.p_error;
  j["p_reject"] = r.empirical.p_reject;
  j["risk"] = r.empirical.risk;
  if (r.bound) {
    j["bound"] = r.bound->value;
    j["bound_limiting"] = r.bound->limiting;
  } else {
    j["bound"] = nullptr;
    j["bound_note"] = r.bound_note;
  }
  return j;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  const bool ensemble = trace.ensemble_scores.size() == trace.size();
  out << "index,prediction,truth,loss,prequential_error,signal,retrained";
  if (ensemble) out << ",score,active";
  out << '\n';
  const auto e = prequential_error(trace.losses);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << int(trace.predictions[i]) << ',' << int(trace.truths[i]) << ','
        << format_double(trace.losses[i]) << ',' << format_double(e[i]) << ',' << to_string(trace.signals[i])
        << ',' << int(trace.retrained[i]);
    if (ensemble) out << ',' << format_double(trace.ensemble_scores[i]) << ',' << trace.ensemble_active[i];
    out << '\n';
  }
}

void write_event_csv(std::ostream& out, const RunTrace& trace, std::string_view detector, bool header) {
  if (header) out << "index,detector,signal\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.signals[i] != Signal::in_control) out << i << ',' << detector << ',' << to_string(trace.signals[i]) << '\n';
}

void write_ensemble_event_csv(std::ostream& out, const RunTrace& trace, double threshold) {
  out << "index,active,decision,drift\n";
  for (std::size_t i = 0; i < trace.ensemble_scores.size(); ++i) {
    const bool drift = trace.signals[i] == Signal::drift;
    if (trace.ensemble_active[i] == 0 && !drift) continue;
    out << i << ',' << trace.ensemble_active[i] << ',' << to_string(decide(trace.ensemble_scores[i], threshold))
        << ',' << (drift ? 1 : 0) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << json.dump(2) << '\n';
}

}  // namespace sparsedrift
