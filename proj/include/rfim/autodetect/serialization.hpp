#pragma once

#include <json.hpp>

#include "rfim/autodetect/detector.hpp"

namespace rfim::detect {

inline constexpr int kModelFormatVersion = 1;

/// {version, d, h, lambda, rho_s, beta_s, input_scale, w_enc, b_enc, w_dec,
///  b_dec, training_digests}; weights are flat row-major arrays.
nlohmann::ordered_json to_json(const SparseAutoencoder& model);
SparseAutoencoder autoencoder_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const MomentSummary& m);
MomentSummary moments_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const DetectorCalibration& cal);
DetectorCalibration calibration_from_json(const nlohmann::json& j);

/// Report: baseline, observed, relative increases, thresholds, decision.
nlohmann::ordered_json detection_report(const DetectorCalibration& cal, const DetectionDecision& decision);

}  // namespace rfim::detect
