#include "rfim/autodetect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "rfim/iqcore/log.hpp"

namespace rfim::detect {

RowMatrix feature_matrix(std::span<const IqSegment> segments, const InputScale& scale) {
  RowMatrix rows(static_cast<Eigen::Index>(segments.size()), static_cast<Eigen::Index>(scale.dim()));
  for (std::size_t k = 0; k < segments.size(); ++k) {
    rows.row(static_cast<Eigen::Index>(k)) = featurize_segment(segments[k], scale).transpose();
  }
  return rows;
}

AutoencoderTrainResult train_autoencoder(std::span<const IqSegment> clean, const AutoencoderTrainConfig& config) {
  if (clean.empty()) throw std::invalid_argument("train_autoencoder: no training segments");
  const std::size_t d = 2 * clean.front().size();
  for (const auto& s : clean) {
    if (2 * s.size() != d) throw std::invalid_argument("train_autoencoder: segments differ in length");
  }
  const auto& hyper = config.hyper;
  if (hyper.hidden_size == 0 || hyper.hidden_size >= d) {
    throw std::invalid_argument("train_autoencoder: hidden size must lie in [1, input dim)");
  }
  if (!(hyper.sparsity_proportion > 0.0 && hyper.sparsity_proportion < 1.0)) {
    throw std::invalid_argument("train_autoencoder: sparsity proportion must lie in (0, 1)");
  }
  if (hyper.l2_weight < 0.0 || hyper.sparsity_weight < 0.0) {
    throw std::invalid_argument("train_autoencoder: regularization weights must be nonnegative");
  }

  auto model = SparseAutoencoder::initialized(d, hyper, config.seed);
  RowMatrix raw(static_cast<Eigen::Index>(clean.size()), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < clean.size(); ++k) raw.row(static_cast<Eigen::Index>(k)) = interleave(clean[k]).transpose();
  model.input_scale = InputScale::fit(raw);
  for (const auto& s : clean) model.training_digests.push_back(segment_digest(s));

  const RowMatrix batch = feature_matrix(clean, model.input_scale);
  SparseAutoencoder work = model;
  const Objective objective = [&work, &batch](const Vector& theta, Vector& grad) {
    work.assign(theta);
    auto lg = ae_loss_and_grad(work, batch);
    grad = std::move(lg.gradient);
    return lg.loss;
  };
  auto scg = scg_minimize(objective, model.flatten(), config.scg);
  model.assign(scg.x);

  return {std::move(model), std::move(scg.loss_history), scg.iterations, scg.converged};
}

MseVector mse_vector(const SparseAutoencoder& model, std::span<const IqSegment> segments) {
  if (segments.size() < 2) throw std::invalid_argument("mse_vector: need at least two segments");
  MseVector v;
  v.values.reserve(segments.size());
  for (const auto& s : segments) v.values.push_back(reconstruct(model, s).mse);
  return v;
}

DetectorCalibration calibrate(const SparseAutoencoder& model, std::span<const IqSegment> clean,
                              const DetectorThresholds& thresholds) {
  if (clean.size() < 2) throw std::invalid_argument("calibrate: need at least two clean segments");
  if (!(thresholds.variance > 0.0) || !(thresholds.skewness > 0.0)) {
    throw std::invalid_argument("calibrate: thresholds must be positive");
  }
  DetectorCalibration cal;
  cal.thresholds = thresholds;

  const std::unordered_set<std::uint64_t> trained(model.training_digests.begin(), model.training_digests.end());
  const auto overlap = static_cast<std::size_t>(std::count_if(
      clean.begin(), clean.end(), [&](const IqSegment& s) { return trained.contains(segment_digest(s)); }));
  if (overlap > 0) {
    cal.warnings.push_back("calibration uses " + std::to_string(overlap) + " of " + std::to_string(clean.size()) +
                           " training segments; baseline MSE is biased low");
    warn(cal.warnings.back());
  }

  cal.baseline = moments(mse_vector(model, clean));
  cal.baseline.skewness_value();
  return cal;
}

double relative_change(double observed, double baseline) {
  if (baseline == 0.0) {
    if (observed == 0.0) return 0.0;
    return observed > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return (observed - baseline) / std::abs(baseline);
}

DetectionDecision decide(const DetectorCalibration& cal, const MomentSummary& observed) {
  const auto& base = cal.baseline;
  DetectionDecision d;
  d.observed = observed;
  d.relative_increase.mean = relative_change(observed.mean, base.mean);
  d.relative_increase.variance = relative_change(observed.variance, base.variance);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  d.relative_increase.skewness =
      observed.skewness && base.skewness ? relative_change(*observed.skewness, *base.skewness) : nan;
  d.relative_increase.kurtosis =
      observed.kurtosis && base.kurtosis ? relative_change(*observed.kurtosis, *base.kurtosis) : nan;
  // NaN compares false, so an undefined skewness cannot trigger detection.
  d.interference_detected = d.relative_increase.variance > cal.thresholds.variance ||
                            d.relative_increase.skewness > cal.thresholds.skewness;
  return d;
}

DetectionDecision detect(const SparseAutoencoder& model, const DetectorCalibration& calibration,
                         std::span<const IqSegment> segments) {
  if (segments.size() < 2) throw std::invalid_argument("detect: need at least two segments");
  return decide(calibration, moments(mse_vector(model, segments)));
}

}  // namespace rfim::detect
