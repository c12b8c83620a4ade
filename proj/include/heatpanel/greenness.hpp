#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "heatpanel/errors.hpp"
#include "heatpanel/io.hpp"
#include "heatpanel/stats.hpp"
#include "heatpanel/text.hpp"

namespace heatpanel {

/// Land-cover class grid; row-major, default 10 m cells.
struct LandcoverGrid {
  int width = 0;
  int height = 0;
  double cell_size_m = 10.0;
  std::vector<int> classes;

  int at(int x, int y) const { return classes[static_cast<std::size_t>(y) * width + x]; }
};

/// Residential/commercial mask on the same grid: each in-mask cell carries
/// the integer municipality id it belongs to, -1 marks cells outside any
/// residential area.
struct ResidentialMask {
  int width = 0;
  int height = 0;
  double cell_size_m = 10.0;
  std::vector<long long> municipality;

  long long at(int x, int y) const {
    return municipality[static_cast<std::size_t>(y) * width + x];
  }
};

/// Which class codes exist and which of them count as green. The default
/// table is the 11-code land-cover legend; the green set (tree, shrub,
/// grassland cover) is a documented default and should be treated as
/// configuration.
struct GreenClassConfig {
  std::set<int> code_table{10, 20, 30, 40, 50, 60, 70, 80, 90, 95, 100};
  std::set<int> green_classes{10, 20, 30};
};

struct GreennessScore {
  std::string municipality_id;
  double rgs = 0.0;          // fraction of green cells in the residential mask
  double rgs_percent = 0.0;  // 100 * rgs
  double z_score = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {
inline void check_mask_alignment(const LandcoverGrid& grid, const ResidentialMask& mask) {
  if (grid.width != mask.width || grid.height != mask.height)
    throw InvalidParameterError("landcover grid and residential mask dimensions differ");
  if (grid.classes.size() != static_cast<std::size_t>(grid.width) * grid.height)
    throw InvalidParameterError("landcover grid cell count does not match its dimensions");
  if (mask.municipality.size() != static_cast<std::size_t>(mask.width) * mask.height)
    throw InvalidParameterError("residential mask cell count does not match its dimensions");
}
}  // namespace detail

/// Residential Green Share: green-classified cells over all mask cells of
/// the municipality.
inline GreennessScore compute_rgs(const LandcoverGrid& grid, const ResidentialMask& mask,
                                  const GreenClassConfig& config,
                                  const std::string& municipality_id) {
  detail::check_mask_alignment(grid, mask);
  long long wanted = -1;
  try {
    wanted = parse_int(municipality_id, "municipality_id");
  } catch (const ParseError&) {
    throw EmptyResidentialAreaError("municipality '" + municipality_id +
                                    "' cannot appear in an integer-coded mask");
  }
  long long total = 0;
  long long green = 0;
  for (std::size_t i = 0; i < mask.municipality.size(); ++i) {
    if (mask.municipality[i] != wanted) continue;
    int cls = grid.classes[i];
    if (!config.code_table.count(cls))
      throw UnknownClassCodeError("class code " + std::to_string(cls) +
                                  " is not in the declared code table");
    ++total;
    if (config.green_classes.count(cls)) ++green;
  }
  if (total == 0)
    throw EmptyResidentialAreaError("municipality '" + municipality_id +
                                    "' has no residential mask cells");
  GreennessScore score;
  score.municipality_id = municipality_id;
  score.rgs = static_cast<double>(green) / static_cast<double>(total);
  score.rgs_percent = 100.0 * score.rgs;
  return score;
}

/// Scores every municipality that appears in the mask, sorted by id.
inline std::vector<GreennessScore> compute_rgs_all(const LandcoverGrid& grid,
                                                   const ResidentialMask& mask,
                                                   const GreenClassConfig& config) {
  detail::check_mask_alignment(grid, mask);
  std::set<long long> ids;
  for (long long m : mask.municipality)
    if (m >= 0) ids.insert(m);
  std::vector<GreennessScore> out;
  for (long long id : ids)
    out.push_back(compute_rgs(grid, mask, config, std::to_string(id)));
  return out;
}

/// Standardizes to sample mean 0 and standard deviation 1 (n-1 denominator).
inline std::vector<double> standardize(std::span<const double> values) {
  if (values.size() < 2)
    throw DegenerateVarianceError("standardization needs at least 2 values");
  Moments m = mean_sd(values);
  if (!(m.sd > 0.0))
    throw DegenerateVarianceError("standardization needs at least 2 distinct values");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((v - m.mean) / m.sd);
  return out;
}

// ---------------------------------------------------------------------------
// File formats: plain-text header "width height cell_size_m" followed by
// height rows of width integers.

namespace detail {

template <typename T>
inline void load_grid_file(const std::filesystem::path& path, int& width, int& height,
                           double& cell_size_m, std::vector<T>& cells) {
  std::istringstream in(read_file(path));
  std::string name = path.filename().string();
  if (!(in >> width >> height >> cell_size_m))
    throw ParseError(name + ": expected header 'width height cell_size_m'");
  if (width <= 0 || height <= 0 || cell_size_m <= 0.0)
    throw ParseError(name + ": grid dimensions and cell size must be positive");
  cells.resize(static_cast<std::size_t>(width) * height);
  for (auto& c : cells) {
    long long v;
    if (!(in >> v)) throw ParseError(name + ": too few grid cells");
    c = static_cast<T>(v);
  }
  long long extra;
  if (in >> extra) throw ParseError(name + ": trailing data after grid cells");
}

template <typename T>
inline std::string grid_file_to_string(int width, int height, double cell_size_m,
                                       const std::vector<T>& cells) {
  std::string out = std::to_string(width) + " " + std::to_string(height) + " " +
                    format_double(cell_size_m) + "\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x > 0) out += " ";
      out += std::to_string(cells[static_cast<std::size_t>(y) * width + x]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace detail

inline LandcoverGrid load_landcover_grid(const std::filesystem::path& path) {
  LandcoverGrid g;
  detail::load_grid_file(path, g.width, g.height, g.cell_size_m, g.classes);
  return g;
}

inline ResidentialMask load_residential_mask(const std::filesystem::path& path) {
  ResidentialMask m;
  detail::load_grid_file(path, m.width, m.height, m.cell_size_m, m.municipality);
  return m;
}

inline std::string landcover_grid_to_string(const LandcoverGrid& g) {
  return detail::grid_file_to_string(g.width, g.height, g.cell_size_m, g.classes);
}

inline std::string residential_mask_to_string(const ResidentialMask& m) {
  return detail::grid_file_to_string(m.width, m.height, m.cell_size_m, m.municipality);
}

/// Green-class config file: integer codes separated by whitespace or commas;
/// '#' starts a comment.
inline std::set<int> load_green_classes(const std::filesystem::path& path) {
  std::set<int> codes;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (const auto& tok : split_list(line))
      codes.insert(static_cast<int>(parse_int(tok, path.filename().string())));
  }
  if (codes.empty())
    throw ParseError(path.filename().string() + ": no green class codes found");
  return codes;
}

inline std::string greenness_scores_to_csv(std::span<const GreennessScore> scores) {
  std::vector<std::string> header{"municipality_id", "rgs", "rgs_percent", "z_score"};
  std::string out = csv_line(header);
  for (const auto& s : scores) {
    std::vector<std::string> row{s.municipality_id, format_double(s.rgs),
                                 format_double(s.rgs_percent), format_double(s.z_score)};
    out += csv_line(row);
  }
  return out;
}

}  // namespace heatpanel
