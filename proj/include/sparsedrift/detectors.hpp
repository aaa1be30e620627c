#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sparsedrift/detectors/adwin.hpp"
#include "sparsedrift/detectors/ddm.hpp"
#include "sparsedrift/detectors/detector.hpp"
#include "sparsedrift/detectors/eddm.hpp"
#include "sparsedrift/detectors/hddm_a.hpp"
#include "sparsedrift/detectors/hddm_w.hpp"
#include "sparsedrift/detectors/kswin.hpp"
#include "sparsedrift/detectors/page_hinkley.hpp"

namespace sparsedrift {

enum class DetectorKind { page_hinkley, ddm, eddm, hddm_a, hddm_w, adwin, kswin };

inline constexpr DetectorKind kAllDetectors[] = {
    DetectorKind::page_hinkley, DetectorKind::ddm,   DetectorKind::eddm,  DetectorKind::hddm_a,
    DetectorKind::hddm_w,       DetectorKind::adwin, DetectorKind::kswin,
};

std::string to_string(DetectorKind kind);
DetectorKind parse_detector_kind(std::string_view text);

/// Parameters for every detector; defaults follow the original publications.
struct DetectorConfig {
  PageHinkley::Config page_hinkley;
  Ddm::Config ddm;
  Eddm::Config eddm;
  HddmA::Config hddm_a;
  HddmW::Config hddm_w;
  Adwin::Config adwin;
  Kswin::Config kswin;
};

std::unique_ptr<DriftDetector> make_detector(DetectorKind kind, const DetectorConfig& config = {});

}  // namespace sparsedrift
