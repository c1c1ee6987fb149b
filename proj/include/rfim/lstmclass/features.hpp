#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "rfim/iqcore/iq_segment.hpp"

namespace rfim::classify {

inline constexpr std::size_t kFeatureChannels = 4;
inline constexpr std::size_t kSequenceLength = 512;

/// Channels x time steps. Rows: |x_n|, arg x_n, |X_k|, arg X_k, with the
/// k-th DFT bin placed at step k.
using FeatureMatrix = Eigen::MatrixXd;

struct NormStats {
  std::array<double, kFeatureChannels> mean{0.0, 0.0, 0.0, 0.0};
  std::array<double, kFeatureChannels> stddev{1.0, 1.0, 1.0, 1.0};
};

/// Unnormalized features. Phases lie in (-pi, pi].
FeatureMatrix raw_features(const IqSegment& segment);

/// Per-channel mean and population standard deviation over a corpus.
/// A zero deviation is replaced by 1 with a warning.
NormStats fit_norm_stats(std::span<const IqSegment> corpus);

/// Z-scored features. Segment length must be kSequenceLength.
FeatureMatrix extract_features(const IqSegment& segment, const NormStats& stats);

}  // namespace rfim::classify
