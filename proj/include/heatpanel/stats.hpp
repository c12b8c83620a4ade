#pragma once

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "heatpanel/errors.hpp"

namespace heatpanel {

struct Moments {
  double mean;
  double sd;  // sample standard deviation, n-1 denominator
};

inline Moments mean_sd(std::span<const double> values) {
  if (values.empty()) throw InvalidParameterError("mean_sd: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameterError("normal_quantile: p must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double normal_cdf(double x) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

inline double p_value_two_sided(double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * normal_cdf(-std::fabs(z));
}

/// Significance codes: ***: 0.01, **: 0.05, *: 0.1.
inline std::string significance_stars(double p) {
  if (std::isnan(p)) return "";
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

}  // namespace heatpanel
