#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatpanel/calendar.hpp"
#include "heatpanel/csv.hpp"
#include "heatpanel/errors.hpp"
#include "heatpanel/text.hpp"

namespace heatpanel {

/// Heat day: municipality maximum temperature >= 30 C (boundary inclusive).
inline constexpr double kHeatDayThresholdC = 30.0;
/// Tropical night: minimum temperature strictly above 20 C.
inline constexpr double kTropicalNightThresholdC = 20.0;
/// A week with at least this many heat days counts as a heat wave.
inline constexpr int kHeatWaveMinDays = 3;

struct CellExtrema {
  double t_max;
  double t_min;
};

/// Daily temperature extrema on the km-grid, keyed by cell id.
struct TemperatureGridDay {
  Date date;
  std::map<std::string, CellExtrema> cells;
};

struct MunicipalityCellMap {
  std::map<std::string, std::vector<std::string>> cells;
};

struct DayFlags {
  bool is_heat_day = false;
  bool is_tropical_night = false;
};

struct WeeklyHeatIndicators {
  std::string municipality_id;
  int year = 0;
  int month_of_year = 0;
  int week_index = 0;
  int heat_days = 0;
  int heat_wave = 0;
  int tropical_nights = 0;
};

inline DayFlags classify_day(double t_max, double t_min) {
  if (t_min > t_max)
    throw InvalidExtremaError("t_min " + format_double(t_min) + " exceeds t_max " +
                              format_double(t_max));
  return {t_max >= kHeatDayThresholdC, t_min > kTropicalNightThresholdC};
}

/// Grid-to-municipality aggregation takes the maximum of both extrema over
/// the member cells, matching the max rule used for exposure.
inline std::pair<double, double> municipality_daily_extrema(
    const TemperatureGridDay& grid_day, const MunicipalityCellMap& cell_map,
    const std::string& municipality_id) {
  auto it = cell_map.cells.find(municipality_id);
  if (it == cell_map.cells.end() || it->second.empty())
    throw UnknownMunicipalityError("municipality '" + municipality_id +
                                   "' has no cells in the cell map");
  double t_max = -std::numeric_limits<double>::infinity();
  double t_min = -std::numeric_limits<double>::infinity();
  for (const auto& cell : it->second) {
    auto c = grid_day.cells.find(cell);
    if (c == grid_day.cells.end())
      throw MissingCellError("cell '" + cell + "' missing from grid day " +
                             format_date(grid_day.date));
    t_max = std::max(t_max, c->second.t_max);
    t_min = std::max(t_min, c->second.t_min);
  }
  return {t_max, t_min};
}

/// Counts flags over exactly one week of daily classifications.
inline WeeklyHeatIndicators weekly_indicators(std::span<const DayFlags> daily_flags) {
  if (daily_flags.size() != 7)
    throw WrongWeekLengthError("expected 7 daily flags, got " +
                               std::to_string(daily_flags.size()));
  WeeklyHeatIndicators w;
  for (const auto& d : daily_flags) {
    w.heat_days += d.is_heat_day ? 1 : 0;
    w.tropical_nights += d.is_tropical_night ? 1 : 0;
  }
  w.heat_wave = w.heat_days >= kHeatWaveMinDays ? 1 : 0;
  return w;
}

struct IndicatorResult {
  std::vector<WeeklyHeatIndicators> rows;
  std::vector<std::string> warnings;
};

/// Derives weekly indicators for every municipality over all complete
/// Monday-anchored weeks in the input. A week with any missing
/// municipality-day is dropped with a warning; no imputation.
inline IndicatorResult compute_weekly_indicators(std::span<const TemperatureGridDay> days,
                                                 const MunicipalityCellMap& cell_map,
                                                 bool summer_only = true) {
  IndicatorResult result;
  std::map<Date, const TemperatureGridDay*> by_date;
  for (const auto& d : days) {
    if (!by_date.emplace(d.date, &d).second)
      throw DuplicateKeyError("duplicate grid day " + format_date(d.date));
  }

  std::set<Date> mondays;
  for (const auto& [date, ptr] : by_date) mondays.insert(week_monday(date));

  for (const auto& [municipality, cells] : cell_map.cells) {
    if (cells.empty())
      throw UnknownMunicipalityError("municipality '" + municipality + "' has an empty cell set");
    for (Date monday : mondays) {
      if (summer_only && !week_in_summer(monday)) continue;
      std::vector<DayFlags> flags;
      flags.reserve(7);
      bool complete = true;
      for (int i = 0; i < 7 && complete; ++i) {
        auto it = by_date.find(monday + std::chrono::days{i});
        if (it == by_date.end()) {
          complete = false;
          break;
        }
        try {
          auto [t_max, t_min] = municipality_daily_extrema(*it->second, cell_map, municipality);
          flags.push_back(classify_day(t_max, t_min));
        } catch (const MissingCellError&) {
          complete = false;
        }
      }
      if (!complete) {
        result.warnings.push_back("municipality " + municipality + ": dropped week of " +
                                  format_date(monday) + " (missing days or cells)");
        continue;
      }
      WeeklyHeatIndicators w = weekly_indicators(flags);
      WeekStamp stamp = week_stamp(monday);
      w.municipality_id = municipality;
      w.year = stamp.year;
      w.month_of_year = stamp.month;
      w.week_index = stamp.week_index;
      result.rows.push_back(std::move(w));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// File formats

/// Grid-day CSV: cell_id, date (ISO-8601), t_max_c, t_min_c.
inline std::vector<TemperatureGridDay> load_grid_days(const std::filesystem::path& path) {
  CsvTable csv = read_csv(path);
  std::size_t c_cell = csv.col("cell_id");
  std::size_t c_date = csv.col("date");
  std::size_t c_max = csv.col("t_max_c");
  std::size_t c_min = csv.col("t_min_c");

  std::map<Date, TemperatureGridDay> by_date;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    if (row.size() <= std::max({c_cell, c_date, c_max, c_min}))
      throw ParseError(where + ": too few fields");
    std::string cell = trim(row[c_cell]);
    Date date = parse_date(row[c_date], where + ", column 'date'");
    double t_max = parse_double(row[c_max], where + ", column 't_max_c'");
    double t_min = parse_double(row[c_min], where + ", column 't_min_c'");
    if (is_missing(t_max) || is_missing(t_min))
      throw ParseError(where + ": temperatures are mandatory");
    if (t_min > t_max)
      throw InvalidExtremaError(where + ": t_min exceeds t_max for cell '" + cell + "'");
    auto& day = by_date[date];
    day.date = date;
    if (!day.cells.emplace(cell, CellExtrema{t_max, t_min}).second)
      throw DuplicateKeyError(where + ": duplicate (cell_id, date) = ('" + cell + "', " +
                              format_date(date) + ")");
  }
  std::vector<TemperatureGridDay> out;
  out.reserve(by_date.size());
  for (auto& [date, day] : by_date) out.push_back(std::move(day));
  return out;
}

/// Cell-map CSV: municipality_id, cell_id.
inline MunicipalityCellMap load_cell_map(const std::filesystem::path& path) {
  CsvTable csv = read_csv(path);
  std::size_t c_muni = csv.col("municipality_id");
  std::size_t c_cell = csv.col("cell_id");
  MunicipalityCellMap map;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    if (row.size() <= std::max(c_muni, c_cell)) throw ParseError(where + ": too few fields");
    std::string muni = trim(row[c_muni]);
    std::string cell = trim(row[c_cell]);
    if (muni.empty() || cell.empty()) throw ParseError(where + ": empty key");
    map.cells[muni].push_back(cell);
  }
  return map;
}

inline std::string weekly_indicators_to_csv(std::span<const WeeklyHeatIndicators> rows) {
  std::vector<std::string> header{"municipality_id", "year",      "month_of_year",
                                  "week_index",      "heat_days", "heat_wave",
                                  "tropical_nights"};
  std::string out = csv_line(header);
  for (const auto& w : rows) {
    std::vector<std::string> row{w.municipality_id,
                                 std::to_string(w.year),
                                 std::to_string(w.month_of_year),
                                 std::to_string(w.week_index),
                                 std::to_string(w.heat_days),
                                 std::to_string(w.heat_wave),
                                 std::to_string(w.tropical_nights)};
    out += csv_line(row);
  }
  return out;
}

inline std::vector<WeeklyHeatIndicators> load_weekly_indicators(const std::filesystem::path& path) {
  CsvTable csv = read_csv(path);
  std::size_t c_muni = csv.col("municipality_id");
  std::size_t c_year = csv.col("year");
  std::size_t c_month = csv.col("month_of_year");
  std::size_t c_week = csv.col("week_index");
  std::size_t c_hd = csv.col("heat_days");
  std::size_t c_hw = csv.col("heat_wave");
  std::size_t c_tn = csv.col("tropical_nights");
  std::vector<WeeklyHeatIndicators> out;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    WeeklyHeatIndicators w;
    w.municipality_id = trim(row.at(c_muni));
    w.year = static_cast<int>(parse_int(row.at(c_year), where + ", column 'year'"));
    w.month_of_year = static_cast<int>(parse_int(row.at(c_month), where + ", column 'month_of_year'"));
    w.week_index = static_cast<int>(parse_int(row.at(c_week), where + ", column 'week_index'"));
    w.heat_days = static_cast<int>(parse_int(row.at(c_hd), where + ", column 'heat_days'"));
    w.heat_wave = static_cast<int>(parse_int(row.at(c_hw), where + ", column 'heat_wave'"));
    w.tropical_nights =
        static_cast<int>(parse_int(row.at(c_tn), where + ", column 'tropical_nights'"));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace heatpanel
