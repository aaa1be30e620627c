#include "sparsedrift/types.hpp"

#include <algorithm>
#include <cctype>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

namespace {
std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}
}  // namespace

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::mcar: return "MCAR";
    case Mechanism::mar: return "MAR";
    case Mechanism::mnar: return "MNAR";
  }
  return "?";
}

std::string to_string(DriftKind k) { return k == DriftKind::abrupt ? "abrupt" : "gradual"; }

std::string to_string(Signal s) {
  switch (s) {
    case Signal::in_control: return "in_control";
    case Signal::warning: return "warning";
    case Signal::drift: return "drift";
  }
  return "?";
}

Mechanism parse_mechanism(std::string_view text) {
  const auto t = lower(text);
  if (t == "mcar") return Mechanism::mcar;
  if (t == "mar") return Mechanism::mar;
  if (t == "mnar") return Mechanism::mnar;
  throw ConfigError("unknown missingness mechanism '" + std::string(text) + "'");
}

DriftKind parse_drift_kind(std::string_view text) {
  const auto t = lower(text);
  if (t == "abrupt") return DriftKind::abrupt;
  if (t == "gradual") return DriftKind::gradual;
  throw ConfigError("unknown drift kind '" + std::string(text) + "'");
}

}  // namespace sparsedrift
