#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "sparsedrift/ensemble.hpp"
#include "sparsedrift/evaluation.hpp"
#include "sparsedrift/imputation.hpp"
#include "sparsedrift/missingness.hpp"

namespace sparsedrift {

using Json = nlohmann::ordered_json;

/// Ensemble risk estimated from a prequential run of an ensemble detector.
///
/// The label of instance i is +1 inside some acceptable detection interval
/// (p, p + ADI] and -1 elsewhere; z_i = y_i * phi_i.
struct RiskReport {
  double mu_z = 0.0;
  CorrelationSummary correlation;
  EmpiricalRisk empirical;
  std::optional<RiskBound> bound;
  /// Why the bound is absent, when it is.
  std::string bound_note;
  RiskParams params;
};

RiskReport risk_report(const RunTrace& trace, std::size_t members, std::size_t adi_floor, double c1,
                       double c2, double t);

Json to_json(const DistributionSpec& spec);
Json to_json(const RunsTestResult& result);
Json to_json(const MissingnessVerdict& verdict);
Json to_json(const ImputationBiasReport& report);
Json to_json(const SelectionReport& report);
Json to_json(const DistributionFit& fit);
Json to_json(const DetectionMetrics& metrics);
/// Scalar metrics only; the prequential error series goes to the trace CSV.
Json to_json(const MetricsReport& report);
Json to_json(const RiskReport& report);

/// index,prediction,truth,loss,prequential_error,signal,retrained[,score,active]
void write_trace_csv(std::ostream& out, const RunTrace& trace);
/// index,detector,signal for every non in_control signal.
void write_event_csv(std::ostream& out, const RunTrace& trace, std::string_view detector,
                     bool header = true);
/// index,active,decision for every instance with an active member or an ensemble drift.
void write_ensemble_event_csv(std::ostream& out, const RunTrace& trace, double threshold);

/// Two-space indented dump with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace sparsedrift
