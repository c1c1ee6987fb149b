#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rfim {

using cdouble = std::complex<double>;

/// Complex baseband samples with their sample rate.
///
/// Construction validates that the sample vector is non-empty, every
/// component is finite and the sample rate is positive. Instances are
/// immutable afterwards.
class IqSegment {
 public:
  IqSegment(std::vector<cdouble> samples, double sample_rate_hz);

  std::span<const cdouble> samples() const { return samples_; }
  const std::vector<cdouble>& vector() const { return samples_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  const cdouble& operator[](std::size_t n) const { return samples_[n]; }

  bool operator==(const IqSegment&) const = default;

 private:
  std::vector<cdouble> samples_;
  double sample_rate_hz_;
};

struct PowerMeasurement {
  double mean_power = 0.0;
};

/// Splits `signal` into windows of `length` samples advancing by `hop`.
/// The trailing remainder that does not fill a window is dropped.
std::vector<IqSegment> segment(const IqSegment& signal, std::size_t length, std::size_t hop);

/// Number of windows `segment` produces; zero when length > n.
std::size_t segment_count(std::size_t n, std::size_t length, std::size_t hop);

/// Mean of |x_n|^2.
PowerMeasurement measure_power(const IqSegment& segment);
double mean_power(std::span<const cdouble> samples);

/// Returns alpha * segment.
IqSegment scaled(const IqSegment& segment, double alpha);

}  // namespace rfim
