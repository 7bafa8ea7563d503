#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gvp {

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month,
                     unsigned& day);

/// Parses a frame stem of the form YYYYMMDD_HHMMSS (UTC). Returns false on
/// malformed input or an invalid calendar date/time.
bool parse_frame_timestamp(std::string_view stem, std::int64_t& ts);

/// Inverse of parse_frame_timestamp.
std::string format_frame_timestamp(std::int64_t ts);

/// ISO-8601 with the explicit offset the value was shifted by, e.g.
/// 2025-06-02T00:05:00+05:30.
std::string format_iso8601(std::int64_t ts, int tz_offset_min);

int local_hour(std::int64_t ts, int tz_offset_min);      // 0..23
int local_weekday(std::int64_t ts, int tz_offset_min);   // Monday = 0
std::int64_t local_day(std::int64_t ts, int tz_offset_min);
std::string format_local_date(std::int64_t day);         // YYYY-MM-DD

}  // namespace gvp
