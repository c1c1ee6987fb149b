#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rfim::detect {

class DegenerateDistribution : public std::runtime_error {
 public:
  DegenerateDistribution() : std::runtime_error("degenerate distribution") {}
};

/// Per-segment mean squared reconstruction errors, in input order.
struct MseVector {
  std::vector<double> values;
};

/// First four moments of an MSE vector.
///
///   mean      = (1/N) sum k_n
///   variance  = (1/(N-1)) sum (k_n - mean)^2
///   skewness  = (1/N) sum (k_n - mean)^3 / variance^(3/2)
///   kurtosis  = (1/N) sum (k_n - mean)^4 / variance^2
///
/// Skewness and kurtosis are empty when the variance is zero. Because the
/// variance is the unbiased one, kurtosis can dip below 1 for very short
/// vectors; it is bounded below by ((N-1)/N)^2.
struct MomentSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;

  /// Throw DegenerateDistribution when undefined.
  double skewness_value() const;
  double kurtosis_value() const;
};

/// Requires at least two values. Sums run over the sorted values, so the
/// result is exactly invariant to the input order.
MomentSummary moments(std::span<const double> values);
inline MomentSummary moments(const MseVector& v) { return moments(v.values); }

}  // namespace rfim::detect
