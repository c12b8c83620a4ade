#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "heatpanel/csv.hpp"
#include "heatpanel/errors.hpp"
#include "heatpanel/text.hpp"

namespace heatpanel {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Static municipality attributes; populations are treated as constant
/// within a year and carry the Eq.-style aggregation weights.
struct MunicipalityRecord {
  std::string municipality_id;
  std::string district_id;
  long long population = 0;
  double elderly_share = kMissing;       // percent of population aged 65+
  double mean_income_10k = kMissing;     // 10k EUR / year
  double hospital_distance_km = kMissing;
  double mean_altitude_km = kMissing;
};

/// One district-week panel row: the response plus every regressor the
/// models consume. heat_days and tropical_nights may be fractional after
/// population-weighted aggregation.
struct DistrictWeekObservation {
  std::string district_id;
  int year = 0;
  int month_of_year = 0;  // summer panel: 6, 7 or 8
  int week_index = 0;
  double deaths_per_1k = kMissing;
  double heat_days = kMissing;
  int heat_wave = 0;
  double tropical_nights = kMissing;
  double elderly_share = kMissing;
  double greenness_z = kMissing;
  double income_10k = kMissing;
  double hospital_distance_km = kMissing;
  double altitude_km = kMissing;
};

struct PanelDataset {
  std::vector<DistrictWeekObservation> observations;
  std::vector<MunicipalityRecord> municipality_table;
  std::string provenance;
};

inline constexpr const char* kPanelColumns[] = {
    "district_id",     "year",          "month_of_year",
    "week_index",      "deaths_per_1k", "heat_days",
    "heat_wave",       "tropical_nights", "elderly_share",
    "greenness_z",     "income_10k",    "hospital_distance_km",
    "altitude_km"};

inline constexpr const char* kMunicipalityColumns[] = {
    "municipality_id", "district_id",         "population",
    "elderly_share",   "mean_income_10k",     "hospital_distance_km",
    "mean_altitude_km"};

/// Numeric panel columns usable as response or regressors.
inline constexpr const char* kNumericPanelColumns[] = {
    "deaths_per_1k", "heat_days",   "heat_wave",
    "tropical_nights", "elderly_share", "greenness_z",
    "income_10k",    "hospital_distance_km", "altitude_km"};

inline double observation_field(const DistrictWeekObservation& o, std::string_view name) {
  if (name == "deaths_per_1k") return o.deaths_per_1k;
  if (name == "heat_days") return o.heat_days;
  if (name == "heat_wave") return static_cast<double>(o.heat_wave);
  if (name == "tropical_nights") return o.tropical_nights;
  if (name == "elderly_share") return o.elderly_share;
  if (name == "greenness_z") return o.greenness_z;
  if (name == "income_10k") return o.income_10k;
  if (name == "hospital_distance_km") return o.hospital_distance_km;
  if (name == "altitude_km") return o.altitude_km;
  throw UnknownColumnError("unknown panel column '" + std::string(name) + "'");
}

inline bool is_numeric_panel_column(std::string_view name) {
  for (const char* c : kNumericPanelColumns)
    if (name == c) return true;
  return false;
}

/// Maps canonical column names to the header names used in a file.
/// Unmapped columns keep their canonical names.
using ColumnSchema = std::map<std::string, std::string>;

namespace detail {
inline std::string schema_name(const ColumnSchema& schema, const std::string& canonical) {
  auto it = schema.find(canonical);
  return it == schema.end() ? canonical : it->second;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string key;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> entries;
  bool ok() const { return entries.empty(); }

  std::string to_string() const {
    std::string out;
    for (const auto& v : entries)
      out += v.key + " [" + v.field + "]: " + v.message + "\n";
    return out;
  }
};

namespace detail {
inline std::string obs_key(const DistrictWeekObservation& o) {
  return "district=" + o.district_id + " year=" + std::to_string(o.year) +
         " week=" + std::to_string(o.week_index);
}
}  // namespace detail

/// Reports every invariant violation; violations are report entries, not
/// failures, so a caller can decide how strict to be.
inline ValidationReport validate_panel(const PanelDataset& panel) {
  ValidationReport report;
  auto add = [&](const std::string& key, const std::string& field, const std::string& msg) {
    report.entries.push_back({key, field, msg});
  };

  std::set<std::tuple<std::string, int, int>> seen;
  std::set<std::string> table_districts;
  for (const auto& m : panel.municipality_table) table_districts.insert(m.district_id);

  for (const auto& o : panel.observations) {
    const std::string key = detail::obs_key(o);
    if (!seen.insert({o.district_id, o.year, o.week_index}).second)
      add(key, "district_id,year,week_index", "duplicate panel key");
    if (o.month_of_year < 6 || o.month_of_year > 8)
      add(key, "month_of_year", "outside the summer months {6,7,8}");
    if (o.week_index < 1) add(key, "week_index", "must be >= 1");
    if (!is_missing(o.deaths_per_1k) && o.deaths_per_1k < 0.0)
      add(key, "deaths_per_1k", "negative death rate");
    if (!is_missing(o.heat_days) && (o.heat_days < 0.0 || o.heat_days > 7.0))
      add(key, "heat_days", "outside [0,7]");
    if (!is_missing(o.tropical_nights) && (o.tropical_nights < 0.0 || o.tropical_nights > 7.0))
      add(key, "tropical_nights", "outside [0,7]");
    if (o.heat_wave != 0 && o.heat_wave != 1)
      add(key, "heat_wave", "must be 0 or 1");
    if (!is_missing(o.heat_days) && (o.heat_wave == 1) != (o.heat_days >= 3.0))
      add(key, "heat_wave", "inconsistent with heat_days: heat_wave must equal (heat_days >= 3)");
    if (!is_missing(o.elderly_share) && (o.elderly_share < 0.0 || o.elderly_share > 100.0))
      add(key, "elderly_share", "outside [0,100] percent");
    if (!is_missing(o.hospital_distance_km) && o.hospital_distance_km < 0.0)
      add(key, "hospital_distance_km", "negative distance");
    if (!is_missing(o.altitude_km) && o.altitude_km < 0.0)
      add(key, "altitude_km", "negative altitude");
    if (!table_districts.empty() && !table_districts.count(o.district_id))
      add(key, "district_id", "district not present in the municipality table");
  }

  std::map<std::string, std::string> muni_district;
  for (const auto& m : panel.municipality_table) {
    const std::string key = "municipality=" + m.municipality_id;
    if (m.population < 0) add(key, "population", "negative population");
    if (!is_missing(m.elderly_share) && (m.elderly_share < 0.0 || m.elderly_share > 100.0))
      add(key, "elderly_share", "outside [0,100] percent");
    if (!is_missing(m.hospital_distance_km) && m.hospital_distance_km < 0.0)
      add(key, "hospital_distance_km", "negative distance");
    if (!is_missing(m.mean_altitude_km) && m.mean_altitude_km < 0.0)
      add(key, "mean_altitude_km", "negative altitude");
    auto [it, inserted] = muni_district.emplace(m.municipality_id, m.district_id);
    if (!inserted && it->second != m.district_id)
      add(key, "district_id", "municipality maps to more than one district");
  }

  return report;
}

// ---------------------------------------------------------------------------
// CSV ingestion

/// Loads the canonical district-week panel. Structural problems (missing
/// columns, duplicate keys, unparseable mandatory fields) throw; soft
/// invariant violations are left to validate_panel.
inline PanelDataset load_panel(const std::filesystem::path& path, const ColumnSchema& schema = {}) {
  CsvTable csv = read_csv(path);
  PanelDataset panel;
  panel.provenance = "loaded from " + path.string();

  std::map<std::string, std::size_t> idx;
  for (const char* canonical : kPanelColumns) {
    const std::string file_name = detail::schema_name(schema, canonical);
    idx[canonical] = csv.col(file_name);  // throws MissingColumnError
  }

  std::map<std::tuple<std::string, int, int>, std::size_t> keys;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    auto field = [&](const char* name) -> const std::string& {
      std::size_t i = idx.at(name);
      if (i >= row.size())
        throw ParseError(where + ": too few fields");
      return row[i];
    };

    DistrictWeekObservation o;
    o.district_id = trim(field("district_id"));
    if (o.district_id.empty())
      throw ParseError(where + ", column 'district_id': empty key");
    o.year = static_cast<int>(parse_int(field("year"), where + ", column 'year'"));
    o.month_of_year = static_cast<int>(
        parse_int(field("month_of_year"), where + ", column 'month_of_year'"));
    o.week_index = static_cast<int>(
        parse_int(field("week_index"), where + ", column 'week_index'"));
    o.deaths_per_1k = parse_double(field("deaths_per_1k"), where + ", column 'deaths_per_1k'");
    o.heat_days = parse_double(field("heat_days"), where + ", column 'heat_days'");
    o.heat_wave = static_cast<int>(parse_int(field("heat_wave"), where + ", column 'heat_wave'"));
    o.tropical_nights = parse_double(field("tropical_nights"), where + ", column 'tropical_nights'");
    o.elderly_share = parse_double(field("elderly_share"), where + ", column 'elderly_share'");
    o.greenness_z = parse_double(field("greenness_z"), where + ", column 'greenness_z'");
    o.income_10k = parse_double(field("income_10k"), where + ", column 'income_10k'");
    o.hospital_distance_km =
        parse_double(field("hospital_distance_km"), where + ", column 'hospital_distance_km'");
    o.altitude_km = parse_double(field("altitude_km"), where + ", column 'altitude_km'");

    auto [it, inserted] = keys.emplace(std::make_tuple(o.district_id, o.year, o.week_index), r + 2);
    if (!inserted)
      throw DuplicateKeyError(path.filename().string() + ": rows " +
                              std::to_string(it->second) + " and " + std::to_string(r + 2) +
                              " share panel key (" + o.district_id + ", " +
                              std::to_string(o.year) + ", " + std::to_string(o.week_index) + ")");
    panel.observations.push_back(std::move(o));
  }
  return panel;
}

inline std::string panel_to_csv(const PanelDataset& panel) {
  std::vector<std::string> header(std::begin(kPanelColumns), std::end(kPanelColumns));
  std::string out = csv_line(header);
  for (const auto& o : panel.observations) {
    std::vector<std::string> row{
        o.district_id,
        std::to_string(o.year),
        std::to_string(o.month_of_year),
        std::to_string(o.week_index),
        format_double(o.deaths_per_1k),
        format_double(o.heat_days),
        std::to_string(o.heat_wave),
        format_double(o.tropical_nights),
        format_double(o.elderly_share),
        format_double(o.greenness_z),
        format_double(o.income_10k),
        format_double(o.hospital_distance_km),
        format_double(o.altitude_km)};
    out += csv_line(row);
  }
  return out;
}

inline void write_panel(const PanelDataset& panel, const std::filesystem::path& path) {
  write_file_atomic(path, panel_to_csv(panel));
}

inline std::vector<MunicipalityRecord> load_municipality_table(const std::filesystem::path& path) {
  CsvTable csv = read_csv(path);
  std::map<std::string, std::size_t> idx;
  for (const char* c : kMunicipalityColumns) idx[c] = csv.col(c);

  std::vector<MunicipalityRecord> out;
  std::map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    auto field = [&](const char* name) -> const std::string& {
      std::size_t i = idx.at(name);
      if (i >= row.size()) throw ParseError(where + ": too few fields");
      return row[i];
    };
    MunicipalityRecord m;
    m.municipality_id = trim(field("municipality_id"));
    m.district_id = trim(field("district_id"));
    if (m.municipality_id.empty() || m.district_id.empty())
      throw ParseError(where + ": empty municipality or district key");
    m.population = parse_int(field("population"), where + ", column 'population'");
    m.elderly_share = parse_double(field("elderly_share"), where + ", column 'elderly_share'");
    m.mean_income_10k = parse_double(field("mean_income_10k"), where + ", column 'mean_income_10k'");
    m.hospital_distance_km =
        parse_double(field("hospital_distance_km"), where + ", column 'hospital_distance_km'");
    m.mean_altitude_km =
        parse_double(field("mean_altitude_km"), where + ", column 'mean_altitude_km'");

    auto [it, inserted] = seen.emplace(m.municipality_id, r + 2);
    if (!inserted)
      throw DuplicateKeyError(path.filename().string() + ": rows " + std::to_string(it->second) +
                              " and " + std::to_string(r + 2) + " share municipality_id '" +
                              m.municipality_id + "'");
    out.push_back(std::move(m));
  }
  return out;
}

inline std::string municipality_table_to_csv(std::span<const MunicipalityRecord> table) {
  std::vector<std::string> header(std::begin(kMunicipalityColumns), std::end(kMunicipalityColumns));
  std::string out = csv_line(header);
  for (const auto& m : table) {
    std::vector<std::string> row{
        m.municipality_id,
        m.district_id,
        std::to_string(m.population),
        format_double(m.elderly_share),
        format_double(m.mean_income_10k),
        format_double(m.hospital_distance_km),
        format_double(m.mean_altitude_km)};
    out += csv_line(row);
  }
  return out;
}

}  // namespace heatpanel
