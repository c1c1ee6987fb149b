#include "rfim/autodetect/moments.hpp"

#include <algorithm>
#include <cmath>

namespace rfim::detect {

double MomentSummary::skewness_value() const {
  if (!skewness) throw DegenerateDistribution();
  return *skewness;
}

double MomentSummary::kurtosis_value() const {
  if (!kurtosis) throw DegenerateDistribution();
  return *kurtosis;
}

MomentSummary moments(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("moments: need at least two values");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("moments: non-finite value");
  }
  std::sort(v.begin(), v.end());

  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;

  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : v) {
    const double dv = x - mean;
    const double d2 = dv * dv;
    s2 += d2;
    s3 += d2 * dv;
    s4 += d2 * d2;
  }

  MomentSummary m;
  m.count = v.size();
  m.mean = mean;
  m.variance = s2 / (n - 1.0);
  if (m.variance > 0.0) {
    m.skewness = (s3 / n) / std::pow(m.variance, 1.5);
    m.kurtosis = (s4 / n) / (m.variance * m.variance);
  }
  return m;
}

}  // namespace rfim::detect
