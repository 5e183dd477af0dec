#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace caif {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_ms();

// ISO-8601 UTC with millisecond precision, e.g. 2026-10-15T08:30:00.000Z
std::string format_iso8601(Timestamp ts);

// Accepts the format produced by format_iso8601 (fraction optional).
// Throws std::invalid_argument on anything else.
Timestamp parse_iso8601(std::string_view text);

}  // namespace caif
