#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "heatpanel/csv.hpp"
#include "heatpanel/errors.hpp"
#include "heatpanel/heat.hpp"
#include "heatpanel/panel.hpp"

namespace heatpanel {

struct WeightedEntry {
  std::string municipality_id;
  double value = 0.0;
  long long population = 0;
};

/// Population-weighted district mean: sum(X_M * P_M) / P_D.
inline double population_weighted_mean(std::span<const WeightedEntry> series) {
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& e : series) {
    weighted += e.value * static_cast<double>(e.population);
    total += static_cast<double>(e.population);
  }
  if (!(total > 0.0))
    throw ZeroTotalPopulationError("total population must be positive for weighted aggregation");
  return weighted / total;
}

/// How heat indicators are carried from municipality to district level.
/// Covariates always use the population-weighted mean.
enum class AggregationMethod { weighted_mean, max };

inline AggregationMethod parse_aggregation_method(const std::string& s) {
  if (s == "weighted_mean") return AggregationMethod::weighted_mean;
  if (s == "max") return AggregationMethod::max;
  throw InvalidParameterError("unknown aggregation method '" + s + "'");
}

struct AggregateResult {
  std::vector<DistrictWeekObservation> rows;
  std::vector<std::string> warnings;
};

namespace detail {

struct DistrictStatics {
  double elderly_share;
  double income_10k;
  double hospital_distance_km;
  double altitude_km;
};

}  // namespace detail

/// Aggregates a municipality-week indicator panel to district-week rows.
/// District covariates are population-weighted means over the district's
/// municipalities; heat indicators use the configured method and the
/// heat_wave flag is re-derived from the aggregated heat_days. Weights are
/// the (annual-constant) municipality populations; zero-population
/// municipalities are excluded with a warning. A district-week is emitted
/// only when every contributing municipality reported that week, so the
/// weighting stays comparable across weeks.
inline AggregateResult aggregate_panel(std::span<const WeeklyHeatIndicators> indicators,
                                       std::span<const MunicipalityRecord> municipality_table,
                                       AggregationMethod method = AggregationMethod::weighted_mean) {
  AggregateResult result;

  std::map<std::string, const MunicipalityRecord*> munis;
  std::map<std::string, std::vector<const MunicipalityRecord*>> district_members;
  for (const auto& m : municipality_table) {
    munis[m.municipality_id] = &m;
    if (m.population == 0) {
      result.warnings.push_back("municipality " + m.municipality_id +
                                ": population 0, excluded from weighted aggregation");
      continue;
    }
    district_members[m.district_id].push_back(&m);
  }

  // Static district covariates, Eq.-weighted once per district.
  std::map<std::string, detail::DistrictStatics> statics;
  for (const auto& [district, members] : district_members) {
    auto weighted = [&](auto field) {
      std::vector<WeightedEntry> series;
      for (const auto* m : members)
        series.push_back({m->municipality_id, field(*m), m->population});
      return population_weighted_mean(series);
    };
    statics[district] = {
        weighted([](const MunicipalityRecord& m) { return m.elderly_share; }),
        weighted([](const MunicipalityRecord& m) { return m.mean_income_10k; }),
        weighted([](const MunicipalityRecord& m) { return m.hospital_distance_km; }),
        weighted([](const MunicipalityRecord& m) { return m.mean_altitude_km; })};
  }

  // Group indicator rows by (district, year, week).
  struct Group {
    int month_of_year = 0;
    std::vector<const WeeklyHeatIndicators*> rows;
  };
  std::map<std::tuple<std::string, int, int>, Group> groups;
  for (const auto& w : indicators) {
    auto it = munis.find(w.municipality_id);
    if (it == munis.end())
      throw UnmappedMunicipalityError("municipality '" + w.municipality_id +
                                      "' is not in the municipality table");
    if (it->second->population == 0) continue;
    auto& g = groups[{it->second->district_id, w.year, w.week_index}];
    g.month_of_year = w.month_of_year;
    g.rows.push_back(&w);
  }

  std::set<std::string> incomplete_warned;
  for (const auto& [key, group] : groups) {
    const auto& [district, year, week] = key;
    const auto& members = district_members.at(district);
    if (group.rows.size() != members.size()) {
      std::string tag = district + "/" + std::to_string(year) + "/" + std::to_string(week);
      result.warnings.push_back("district " + tag + ": dropped (only " +
                                std::to_string(group.rows.size()) + " of " +
                                std::to_string(members.size()) + " municipalities reported)");
      continue;
    }

    auto series_of = [&](auto field) {
      std::vector<WeightedEntry> series;
      for (const auto* w : group.rows)
        series.push_back({w->municipality_id, field(*w),
                          munis.at(w->municipality_id)->population});
      return series;
    };
    auto aggregate = [&](auto field) {
      if (method == AggregationMethod::max) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto* w : group.rows) best = std::max(best, field(*w));
        return best;
      }
      return population_weighted_mean(series_of(field));
    };

    DistrictWeekObservation o;
    o.district_id = district;
    o.year = year;
    o.week_index = week;
    o.month_of_year = group.month_of_year;
    o.heat_days = aggregate([](const WeeklyHeatIndicators& w) { return double(w.heat_days); });
    o.tropical_nights =
        aggregate([](const WeeklyHeatIndicators& w) { return double(w.tropical_nights); });
    o.heat_wave = o.heat_days >= double(kHeatWaveMinDays) ? 1 : 0;
    const auto& s = statics.at(district);
    o.elderly_share = s.elderly_share;
    o.income_10k = s.income_10k;
    o.hospital_distance_km = s.hospital_distance_km;
    o.altitude_km = s.altitude_km;
    result.rows.push_back(std::move(o));
  }
  return result;
}

/// Population-weighted district mean of an arbitrary per-municipality value.
inline std::map<std::string, double> district_weighted_values(
    std::span<const MunicipalityRecord> municipality_table,
    const std::map<std::string, double>& values,
    std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, std::vector<WeightedEntry>> by_district;
  for (const auto& m : municipality_table) {
    auto it = values.find(m.municipality_id);
    if (it == values.end()) {
      if (warnings)
        warnings->push_back("municipality " + m.municipality_id + ": no value, skipped");
      continue;
    }
    if (m.population == 0) {
      if (warnings)
        warnings->push_back("municipality " + m.municipality_id +
                            ": population 0, excluded from weighted aggregation");
      continue;
    }
    by_district[m.district_id].push_back({m.municipality_id, it->second, m.population});
  }
  std::map<std::string, double> out;
  for (const auto& [district, series] : by_district)
    out[district] = population_weighted_mean(series);
  return out;
}

// ---------------------------------------------------------------------------
// Mortality join

struct MortalityRow {
  std::string district_id;
  int year = 0;
  int week_index = 0;
  double deaths_per_1k = kMissing;
};

/// Mortality CSV: district_id, year, week_index, deaths_per_1k.
inline std::vector<MortalityRow> load_mortality(const std::filesystem::path& path) {
  CsvTable csv = read_csv(path);
  std::size_t c_d = csv.col("district_id");
  std::size_t c_y = csv.col("year");
  std::size_t c_w = csv.col("week_index");
  std::size_t c_r = csv.col("deaths_per_1k");
  std::vector<MortalityRow> out;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
    MortalityRow m;
    m.district_id = trim(row.at(c_d));
    m.year = static_cast<int>(parse_int(row.at(c_y), where + ", column 'year'"));
    m.week_index = static_cast<int>(parse_int(row.at(c_w), where + ", column 'week_index'"));
    m.deaths_per_1k = parse_double(row.at(c_r), where + ", column 'deaths_per_1k'");
    out.push_back(std::move(m));
  }
  return out;
}

inline std::string mortality_to_csv(std::span<const MortalityRow> rows) {
  std::vector<std::string> header{"district_id", "year", "week_index", "deaths_per_1k"};
  std::string out = csv_line(header);
  for (const auto& m : rows) {
    std::vector<std::string> row{m.district_id, std::to_string(m.year),
                                 std::to_string(m.week_index), format_double(m.deaths_per_1k)};
    out += csv_line(row);
  }
  return out;
}

/// Fills deaths_per_1k by (district, year, week). Panel rows without a
/// mortality match keep a missing response; unmatched mortality rows are
/// reported as warnings.
inline std::vector<std::string> join_mortality(std::vector<DistrictWeekObservation>& rows,
                                               std::span<const MortalityRow> mortality) {
  std::map<std::tuple<std::string, int, int>, double> lookup;
  for (const auto& m : mortality)
    lookup[{m.district_id, m.year, m.week_index}] = m.deaths_per_1k;

  std::set<std::tuple<std::string, int, int>> used;
  for (auto& o : rows) {
    auto it = lookup.find({o.district_id, o.year, o.week_index});
    if (it != lookup.end()) {
      o.deaths_per_1k = it->second;
      used.insert(it->first);
    }
  }
  std::vector<std::string> warnings;
  for (const auto& [key, v] : lookup) {
    if (!used.count(key))
      warnings.push_back("mortality row (" + std::get<0>(key) + ", " +
                         std::to_string(std::get<1>(key)) + ", " +
                         std::to_string(std::get<2>(key)) + ") has no panel row");
  }
  return warnings;
}

}  // namespace heatpanel
