#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace skycloud {

/// All timestamps are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SSZ`. Throws Error(Timestamp) on malformed input.
Timestamp parse_iso_utc(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso_utc(Timestamp t);

/// Parses a compact `YYYYMMDDHHMMSS` stamp; returns nullopt when `text` is not one.
std::optional<Timestamp> parse_compact_utc(std::string_view text);

std::string format_compact_utc(Timestamp t);

}  // namespace skycloud
