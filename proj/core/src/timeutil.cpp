#include "gvp/timeutil.hpp"

#include <cctype>
#include <cstdio>

namespace gvp {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  return a - floor_div(a, b) * b;
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yr + (m <= 2));
}

namespace {

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, unsigned m) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap_year(y)) return 29;
  return table[m - 1];
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

bool parse_frame_timestamp(std::string_view stem, std::int64_t& ts) {
  if (stem.size() != 15 || stem[8] != '_') return false;
  const std::string_view date = stem.substr(0, 8);
  const std::string_view time = stem.substr(9, 6);
  if (!all_digits(date) || !all_digits(time)) return false;
  const int y = to_int(date.substr(0, 4));
  const unsigned mo = static_cast<unsigned>(to_int(date.substr(4, 2)));
  const unsigned d = static_cast<unsigned>(to_int(date.substr(6, 2)));
  const int hh = to_int(time.substr(0, 2));
  const int mm = to_int(time.substr(2, 2));
  const int ss = to_int(time.substr(4, 2));
  if (mo < 1 || mo > 12) return false;
  if (d < 1 || static_cast<int>(d) > days_in_month(y, mo)) return false;
  if (hh > 23 || mm > 59 || ss > 59) return false;
  ts = days_from_civil(y, mo, d) * 86400 + hh * 3600 + mm * 60 + ss;
  return true;
}

std::string format_frame_timestamp(std::int64_t ts) {
  int y;
  unsigned mo, d;
  civil_from_days(floor_div(ts, 86400), y, mo, d);
  const std::int64_t sod = floor_mod(ts, 86400);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d%02u%02u_%02lld%02lld%02lld", y, mo, d,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod / 60) % 60),
                static_cast<long long>(sod % 60));
  return buf;
}

std::string format_iso8601(std::int64_t ts, int tz_offset_min) {
  const std::int64_t local = ts + static_cast<std::int64_t>(tz_offset_min) * 60;
  int y;
  unsigned mo, d;
  civil_from_days(floor_div(local, 86400), y, mo, d);
  const std::int64_t sod = floor_mod(local, 86400);
  const char sign = tz_offset_min < 0 ? '-' : '+';
  const int abs_off = tz_offset_min < 0 ? -tz_offset_min : tz_offset_min;
  char buf[64];
  std::snprintf(buf, sizeof(buf),
                "%04d-%02u-%02uT%02lld:%02lld:%02lld%c%02d:%02d", y, mo, d,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod / 60) % 60),
                static_cast<long long>(sod % 60), sign, abs_off / 60,
                abs_off % 60);
  return buf;
}

int local_hour(std::int64_t ts, int tz_offset_min) {
  const std::int64_t local = ts + static_cast<std::int64_t>(tz_offset_min) * 60;
  return static_cast<int>(floor_mod(local, 86400) / 3600);
}

int local_weekday(std::int64_t ts, int tz_offset_min) {
  // 1970-01-01 was a Thursday; Monday = 0.
  return static_cast<int>(floor_mod(local_day(ts, tz_offset_min) + 3, 7));
}

std::int64_t local_day(std::int64_t ts, int tz_offset_min) {
  const std::int64_t local = ts + static_cast<std::int64_t>(tz_offset_min) * 60;
  return floor_div(local, 86400);
}

std::string format_local_date(std::int64_t day) {
  int y;
  unsigned mo, d;
  civil_from_days(day, y, mo, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, mo, d);
  return buf;
}

}  // namespace gvp
