#include "sparsedrift/detectors.hpp"
#include "sparsedrift/errors.hpp"

namespace sparsedrift {

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::page_hinkley: return "page_hinkley";
    case DetectorKind::ddm: return "ddm";
    case DetectorKind::eddm: return "eddm";
    case DetectorKind::hddm_a: return "hddm_a";
    case DetectorKind::hddm_w: return "hddm_w";
    case DetectorKind::adwin: return "adwin";
    case DetectorKind::kswin: return "kswin";
  }
  return "?";
}

DetectorKind parse_detector_kind(std::string_view text) {
  for (auto kind : kAllDetectors)
    if (to_string(kind) == text) return kind;
  if (text == "ph") return DetectorKind::page_hinkley;
  throw ConfigError("unknown detector '" + std::string(text) + "'");
}

std::unique_ptr<DriftDetector> make_detector(DetectorKind kind, const DetectorConfig& config) {
  switch (kind) {
    case DetectorKind::page_hinkley: return std::make_unique<PageHinkley>(config.page_hinkley);
    case DetectorKind::ddm: return std::make_unique<Ddm>(config.ddm);
    case DetectorKind::eddm: return std::make_unique<Eddm>(config.eddm);
    case DetectorKind::hddm_a: return std::make_unique<HddmA>(config.hddm_a);
    case DetectorKind::hddm_w: return std::make_unique<HddmW>(config.hddm_w);
    case DetectorKind::adwin: return std::make_unique<Adwin>(config.adwin);
    case DetectorKind::kswin: return std::make_unique<Kswin>(config.kswin);
  }
  throw ConfigError("unknown detector kind");
}

}  // namespace sparsedrift
