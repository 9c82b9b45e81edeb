#include "rca/util/timefmt.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>

namespace rca {

std::string format_utc(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::optional<std::int64_t> parse_utc(const std::string& text) {
    if (text.size() != 20) return std::nullopt;
    static const char* pattern = "dddd-dd-ddTdd:dd:ddZ";
    for (std::size_t i = 0; i < 20; ++i) {
        char p = pattern[i];
        char c = text[i];
        if (p == 'd') {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        } else if (c != p) {
            return std::nullopt;
        }
    }
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = 0; i < len; ++i) v = v * 10 + (text[pos + i] - '0');
        return v;
    };
    std::tm tm{};
    tm.tm_year = num(0, 4) - 1900;
    tm.tm_mon = num(5, 2) - 1;
    tm.tm_mday = num(8, 2);
    tm.tm_hour = num(11, 2);
    tm.tm_min = num(14, 2);
    tm.tm_sec = num(17, 2);
    if (tm.tm_mon < 0 || tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 ||
        tm.tm_hour > 23 || tm.tm_min > 59 || tm.tm_sec > 59)
        return std::nullopt;
    std::tm probe = tm;
    std::time_t t = timegm(&probe);
    if (t == -1) return std::nullopt;
    // timegm normalizes out-of-range dates (e.g. Feb 30); require a round trip.
    if (probe.tm_mday != tm.tm_mday || probe.tm_mon != tm.tm_mon) return std::nullopt;
    return static_cast<std::int64_t>(t);
}

} // namespace rca
