#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rca {

// Alarm timestamps are UTC with seconds precision, textual form
// "YYYY-MM-DDThh:mm:ssZ". Internally they are epoch seconds.

std::string format_utc(std::int64_t epoch_seconds);

// Strict parse of the fixed 20-character form; rejects anything else.
std::optional<std::int64_t> parse_utc(const std::string& text);

} // namespace rca
