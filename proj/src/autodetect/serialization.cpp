#include "rfim/autodetect/serialization.hpp"

#include <stdexcept>
#include <string>

namespace rfim::detect {
namespace {

template <typename Derived>
nlohmann::ordered_json flat_array(const Eigen::DenseBase<Derived>& m) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  // RowMajor storage already holds the row-major order.
  const auto& d = m.derived();
  for (Eigen::Index i = 0; i < d.size(); ++i) a.push_back(d.data()[i]);
  return a;
}

void read_into(const nlohmann::json& j, const char* key, double* dst, Eigen::Index n) {
  if (!j.contains(key) || !j[key].is_array() || static_cast<Eigen::Index>(j[key].size()) != n) {
    throw std::runtime_error(std::string("model json: field '") + key + "' missing or wrong size");
  }
  for (Eigen::Index i = 0; i < n; ++i) dst[i] = j[key][static_cast<std::size_t>(i)].get<double>();
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

nlohmann::ordered_json to_json(const SparseAutoencoder& m) {
  nlohmann::ordered_json j;
  j["version"] = kModelFormatVersion;
  j["d"] = m.input_dim();
  j["h"] = m.hidden_size();
  j["lambda"] = m.l2_weight;
  j["rho_s"] = m.sparsity_proportion;
  j["beta_s"] = m.sparsity_weight;
  j["input_scale"] = {{"min", flat_array(m.input_scale.min)}, {"max", flat_array(m.input_scale.max)}};
  j["w_enc"] = flat_array(m.w_enc);
  j["b_enc"] = flat_array(m.b_enc);
  j["w_dec"] = flat_array(m.w_dec);
  j["b_dec"] = flat_array(m.b_dec);
  j["training_digests"] = m.training_digests;
  return j;
}

SparseAutoencoder autoencoder_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw std::runtime_error("model json: unsupported version " + j.at("version").dump());
    }
    const auto d = j.at("d").get<Eigen::Index>();
    const auto h = j.at("h").get<Eigen::Index>();
    if (d <= 0 || h <= 0) throw std::runtime_error("model json: non-positive dimensions");
    SparseAutoencoder m;
    m.w_enc.resize(h, d);
    m.b_enc.resize(h);
    m.w_dec.resize(d, h);
    m.b_dec.resize(d);
    m.input_scale.min.resize(d);
    m.input_scale.max.resize(d);
    m.l2_weight = j.at("lambda").get<double>();
    m.sparsity_proportion = j.at("rho_s").get<double>();
    m.sparsity_weight = j.at("beta_s").get<double>();
    read_into(j.at("input_scale"), "min", m.input_scale.min.data(), d);
    read_into(j.at("input_scale"), "max", m.input_scale.max.data(), d);
    read_into(j, "w_enc", m.w_enc.data(), h * d);
    read_into(j, "b_enc", m.b_enc.data(), h);
    read_into(j, "w_dec", m.w_dec.data(), d * h);
    read_into(j, "b_dec", m.b_dec.data(), d);
    if (j.contains("training_digests")) m.training_digests = j["training_digests"].get<std::vector<std::uint64_t>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model json: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const MomentSummary& m) {
  return {{"count", m.count},
          {"mean", m.mean},
          {"variance", m.variance},
          {"skewness", optional_number(m.skewness)},
          {"kurtosis", optional_number(m.kurtosis)}};
}

MomentSummary moments_from_json(const nlohmann::json& j) {
  MomentSummary m;
  m.count = j.at("count").get<std::size_t>();
  m.mean = j.at("mean").get<double>();
  m.variance = j.at("variance").get<double>();
  m.skewness = read_optional(j, "skewness");
  m.kurtosis = read_optional(j, "kurtosis");
  return m;
}

nlohmann::ordered_json to_json(const DetectorCalibration& cal) {
  nlohmann::ordered_json j;
  j["version"] = kModelFormatVersion;
  j["baseline"] = to_json(cal.baseline);
  j["thresholds"] = {{"variance", cal.thresholds.variance}, {"skewness", cal.thresholds.skewness}};
  j["warnings"] = cal.warnings;
  return j;
}

DetectorCalibration calibration_from_json(const nlohmann::json& j) {
  try {
    DetectorCalibration cal;
    cal.baseline = moments_from_json(j.at("baseline"));
    cal.thresholds.variance = j.at("thresholds").at("variance").get<double>();
    cal.thresholds.skewness = j.at("thresholds").at("skewness").get<double>();
    if (j.contains("warnings")) cal.warnings = j["warnings"].get<std::vector<std::string>>();
    return cal;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("calibration json: ") + e.what());
  }
}

nlohmann::ordered_json detection_report(const DetectorCalibration& cal, const DetectionDecision& d) {
  nlohmann::ordered_json j;
  j["baseline"] = to_json(cal.baseline);
  j["observed"] = to_json(d.observed);
  j["relative_increase"] = {{"mean", d.relative_increase.mean},
                            {"variance", d.relative_increase.variance},
                            {"skewness", d.relative_increase.skewness},
                            {"kurtosis", d.relative_increase.kurtosis}};
  j["thresholds"] = {{"variance", cal.thresholds.variance}, {"skewness", cal.thresholds.skewness}};
  j["interference_detected"] = d.interference_detected;
  return j;
}

}  // namespace rfim::detect
