#pragma once

#include <string>
#include <string_view>

namespace sparsedrift {

enum class Mechanism { mcar, mar, mnar };
enum class DriftKind { abrupt, gradual };
enum class Signal { in_control, warning, drift };

std::string to_string(Mechanism m);
std::string to_string(DriftKind k);
std::string to_string(Signal s);

/// Case-insensitive; throws ConfigError on unknown names.
Mechanism parse_mechanism(std::string_view text);
DriftKind parse_drift_kind(std::string_view text);

}  // namespace sparsedrift
