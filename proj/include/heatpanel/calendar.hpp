#pragma once

#include <chrono>
#include <cstdio>
#include <string>

#include "heatpanel/errors.hpp"
#include "heatpanel/text.hpp"

namespace heatpanel {

using Date = std::chrono::sys_days;

inline Date make_date(int y, unsigned m, unsigned d) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) throw ParseError("invalid calendar date");
  return Date{ymd};
}

/// Parses strict ISO-8601 "YYYY-MM-DD".
inline Date parse_date(std::string_view s, const std::string& context) {
  std::string t = trim(s);
  if (t.size() != 10 || t[4] != '-' || t[7] != '-')
    throw ParseError(context + ": expected ISO date YYYY-MM-DD, got '" + t + "'");
  int y = static_cast<int>(parse_int(t.substr(0, 4), context));
  int m = static_cast<int>(parse_int(t.substr(5, 2), context));
  int d = static_cast<int>(parse_int(t.substr(8, 2), context));
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ParseError(context + ": invalid calendar date '" + t + "'");
  return Date{ymd};
}

inline std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

/// Monday on or before the given day. Weeks are consecutive Monday-anchored
/// 7-day blocks throughout.
inline Date week_monday(Date d) {
  std::chrono::weekday wd{d};
  return d - std::chrono::days{wd.iso_encoding() - 1};
}

inline Date week_thursday(Date monday) { return monday + std::chrono::days{3}; }

/// Calendar position of a Monday-anchored week. Year and month follow the
/// majority of the week's days, which is the year/month of its Thursday;
/// the index is the ISO-style week number within that year.
struct WeekStamp {
  int year;
  int month;
  int week_index;
};

inline WeekStamp week_stamp(Date monday) {
  Date thu = week_thursday(monday);
  std::chrono::year_month_day ymd{thu};
  int year = int(ymd.year());
  Date jan1 = make_date(year, 1, 1);
  int doy = static_cast<int>((thu - jan1).count()) + 1;
  return WeekStamp{year, static_cast<int>(unsigned(ymd.month())), (doy - 1) / 7 + 1};
}

/// A week belongs to the summer panel when at least 4 of its days fall in
/// June-August, i.e. when its Thursday does.
inline bool week_in_summer(Date monday) {
  int m = week_stamp(monday).month;
  return m >= 6 && m <= 8;
}

}  // namespace heatpanel
