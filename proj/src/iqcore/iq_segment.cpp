#include "rfim/iqcore/iq_segment.hpp"

#include <cmath>
#include <stdexcept>

namespace rfim {

IqSegment::IqSegment(std::vector<cdouble> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.empty()) {
    throw std::invalid_argument("IqSegment: empty sample vector");
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw std::invalid_argument("IqSegment: sample rate must be positive");
  }
  for (const auto& s : samples_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw std::invalid_argument("IqSegment: non-finite sample");
    }
  }
}

std::size_t segment_count(std::size_t n, std::size_t length, std::size_t hop) {
  if (length == 0 || hop == 0 || length > n) return 0;
  return (n - length) / hop + 1;
}

std::vector<IqSegment> segment(const IqSegment& signal, std::size_t length, std::size_t hop) {
  if (length == 0) throw std::invalid_argument("segment: length must be positive");
  if (hop == 0) throw std::invalid_argument("segment: hop must be positive");
  if (length > signal.size()) throw std::invalid_argument("segment longer than signal");

  const std::size_t count = segment_count(signal.size(), length, hop);
  std::vector<IqSegment> out;
  out.reserve(count);
  const auto& src = signal.vector();
  for (std::size_t k = 0; k < count; ++k) {
    const auto first = src.begin() + static_cast<std::ptrdiff_t>(k * hop);
    out.emplace_back(std::vector<cdouble>(first, first + static_cast<std::ptrdiff_t>(length)),
                     signal.sample_rate_hz());
  }
  return out;
}

double mean_power(std::span<const cdouble> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return acc / static_cast<double>(samples.size());
}

PowerMeasurement measure_power(const IqSegment& segment) {
  return {mean_power(segment.samples())};
}

IqSegment scaled(const IqSegment& segment, double alpha) {
  std::vector<cdouble> out(segment.vector());
  for (auto& s : out) s *= alpha;
  return {std::move(out), segment.sample_rate_hz()};
}

}  // namespace rfim
