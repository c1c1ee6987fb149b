#include "rfim/lstmclass/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rfim/iqcore/log.hpp"
#include "rfim/iqcore/spectral.hpp"

namespace rfim::classify {
namespace {

double phase(cdouble z) {
  const double a = std::arg(z);
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

}  // namespace

FeatureMatrix raw_features(const IqSegment& segment) {
  const auto n = static_cast<Eigen::Index>(segment.size());
  const auto spectrum = dft(segment);
  FeatureMatrix f(kFeatureChannels, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto x = segment[static_cast<std::size_t>(t)];
    const auto xk = spectrum[static_cast<std::size_t>(t)];
    f(0, t) = std::abs(x);
    f(1, t) = phase(x);
    f(2, t) = std::abs(xk);
    f(3, t) = phase(xk);
  }
  return f;
}

NormStats fit_norm_stats(std::span<const IqSegment> corpus) {
  if (corpus.empty()) throw std::invalid_argument("fit_norm_stats: empty corpus");
  std::array<double, kFeatureChannels> sum{}, sq{};
  double count = 0.0;
  std::vector<FeatureMatrix> all;
  all.reserve(corpus.size());
  for (const auto& s : corpus) {
    all.push_back(raw_features(s));
    for (std::size_t c = 0; c < kFeatureChannels; ++c) sum[c] += all.back().row(static_cast<Eigen::Index>(c)).sum();
    count += static_cast<double>(all.back().cols());
  }
  NormStats stats;
  for (std::size_t c = 0; c < kFeatureChannels; ++c) stats.mean[c] = sum[c] / count;
  for (const auto& f : all) {
    for (std::size_t c = 0; c < kFeatureChannels; ++c) {
      sq[c] += (f.row(static_cast<Eigen::Index>(c)).array() - stats.mean[c]).square().sum();
    }
  }
  for (std::size_t c = 0; c < kFeatureChannels; ++c) {
    stats.stddev[c] = std::sqrt(sq[c] / count);
    if (!(stats.stddev[c] > 0.0)) {
      warn("feature channel " + std::to_string(c) + " has zero deviation; using 1");
      stats.stddev[c] = 1.0;
    }
  }
  return stats;
}

FeatureMatrix extract_features(const IqSegment& segment, const NormStats& stats) {
  if (segment.size() != kSequenceLength) {
    throw std::invalid_argument("extract_features: segment length " + std::to_string(segment.size()) +
                                ", expected " + std::to_string(kSequenceLength));
  }
  FeatureMatrix f = raw_features(segment);
  for (std::size_t c = 0; c < kFeatureChannels; ++c) {
    double sd = stats.stddev[c];
    if (!(sd > 0.0)) {
      warn("feature channel " + std::to_string(c) + " has zero deviation; using 1");
      sd = 1.0;
    }
    const auto r = static_cast<Eigen::Index>(c);
    f.row(r) = (f.row(r).array() - stats.mean[c]) / sd;
  }
  return f;
}

}  // namespace rfim::classify
