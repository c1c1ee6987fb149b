#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfim/autodetect/autoencoder.hpp"
#include "rfim/autodetect/moments.hpp"
#include "rfim/autodetect/scg.hpp"
#include "rfim/iqcore/iq_segment.hpp"

namespace rfim::detect {

struct AutoencoderTrainConfig {
  AutoencoderHyper hyper;
  ScgOptions scg;
  std::uint64_t seed = 0;
};

struct AutoencoderTrainResult {
  SparseAutoencoder model;
  std::vector<double> loss_history;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Fits the input scale on the clean corpus, then trains all weights with
/// full-batch SCG. All segments must share one length; hidden size must be
/// smaller than the input dimension.
AutoencoderTrainResult train_autoencoder(std::span<const IqSegment> clean, const AutoencoderTrainConfig& config);

/// Featurized rows of `segments` under `scale`.
RowMatrix feature_matrix(std::span<const IqSegment> segments, const InputScale& scale);

/// Reconstruction MSE per segment; needs at least two segments.
MseVector mse_vector(const SparseAutoencoder& model, std::span<const IqSegment> segments);

/// Relative-increase thresholds, OR-combined.
struct DetectorThresholds {
  double variance = 0.20;
  double skewness = 0.50;
};

struct DetectorCalibration {
  MomentSummary baseline;
  DetectorThresholds thresholds;
  std::vector<std::string> warnings;
};

/// Baseline moments of the MSE vector over interference-free segments.
/// Throws DegenerateDistribution if the baseline variance is zero. Overlap
/// with the training set is allowed but recorded as a warning.
DetectorCalibration calibrate(const SparseAutoencoder& model, std::span<const IqSegment> clean,
                              const DetectorThresholds& thresholds = {});

struct RelativeIncrease {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;  // NaN when the observed skewness is undefined
  double kurtosis = 0.0;
};

struct DetectionDecision {
  bool interference_detected = false;
  MomentSummary observed;
  RelativeIncrease relative_increase;
};

/// (observed - baseline) / |baseline|.
double relative_change(double observed, double baseline);

/// Flags interference when the variance or the skewness of the MSE vector
/// rises by more than its threshold relative to the calibration baseline.
DetectionDecision detect(const SparseAutoencoder& model, const DetectorCalibration& calibration,
                         std::span<const IqSegment> segments);

/// Decision rule alone, for precomputed moments.
DetectionDecision decide(const DetectorCalibration& calibration, const MomentSummary& observed);

}  // namespace rfim::detect
