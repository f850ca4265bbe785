#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace quadlin {

inline constexpr std::string_view kVersion = "0.3.1";

enum class ReportFormat { json, csv };

ReportFormat parse_format(std::string_view name);

/// "%.17g"; non-finite values become null.
std::string format_number(double v);

/// Serializes with insertion-ordered keys and the fixed number format above.
std::string to_json_bytes(const nlohmann::ordered_json& value);

}  // namespace quadlin
