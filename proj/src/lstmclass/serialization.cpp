#include "rfim/lstmclass/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rfim::classify {
namespace {

constexpr const char* kGateNames[] = {"input", "forget", "output", "cell"};

template <typename Derived>
nlohmann::ordered_json row_major(const Eigen::DenseBase<Derived>& m) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

template <typename M>
void read_row_major(const nlohmann::json& a, M&& m, const std::string& what) {
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != m.rows() * m.cols()) {
    throw std::runtime_error("lstm json: field '" + what + "' missing or wrong size");
  }
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = a[k++].get<double>();
  }
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json metrics_json(const ClassMetrics& m) {
  nlohmann::ordered_json j;
  j["total"] = m.total;
  j["accuracy"] = number_or_null(m.accuracy);
  j["rmse"] = number_or_null(m.rmse);
  j["per_class_accuracy"] = nlohmann::ordered_json::array();
  j["per_class_rmse"] = nlohmann::ordered_json::array();
  for (double v : m.per_class_accuracy) j["per_class_accuracy"].push_back(number_or_null(v));
  for (double v : m.per_class_rmse) j["per_class_rmse"].push_back(number_or_null(v));
  j["confusion_matrix"] = m.confusion;
  return j;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const LstmModel& m) {
  nlohmann::ordered_json j;
  j["version"] = kLstmFormatVersion;
  j["hidden_size"] = m.hidden_size();
  j["input_size"] = m.input_size();
  j["labels"] = m.labels;
  j["normalization"] = {{"mean", m.norm.mean}, {"std", m.norm.stddev}};
  nlohmann::ordered_json gates;
  for (int g = 0; g < 4; ++g) {
    const auto gate = static_cast<Gate>(g);
    gates[kGateNames[g]] = {{"w", row_major(m.gate_w(gate))}, {"u", row_major(m.gate_u(gate))},
                            {"b", row_major(m.gate_b(gate))}};
  }
  j["gates"] = gates;
  j["w_fc"] = row_major(m.w_fc);
  j["b_fc"] = row_major(m.b_fc);
  return j;
}

LstmModel lstm_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kLstmFormatVersion) {
      throw std::runtime_error("lstm json: unsupported version " + j.at("version").dump());
    }
    const auto h = j.at("hidden_size").get<Eigen::Index>();
    const auto f = j.at("input_size").get<Eigen::Index>();
    auto m = LstmModel::initialized(h, f, j.at("labels").get<std::vector<std::string>>(), 0);
    m.norm.mean = j.at("normalization").at("mean").get<std::array<double, kFeatureChannels>>();
    m.norm.stddev = j.at("normalization").at("std").get<std::array<double, kFeatureChannels>>();
    for (int g = 0; g < 4; ++g) {
      const auto gate = static_cast<Gate>(g);
      const auto& gj = j.at("gates").at(kGateNames[g]);
      read_row_major(gj.at("w"), m.gate_w(gate), std::string(kGateNames[g]) + ".w");
      read_row_major(gj.at("u"), m.gate_u(gate), std::string(kGateNames[g]) + ".u");
      read_row_major(gj.at("b"), m.gate_b(gate), std::string(kGateNames[g]) + ".b");
    }
    read_row_major(j.at("w_fc"), m.w_fc, "w_fc");
    read_row_major(j.at("b_fc"), m.b_fc, "b_fc");
    if (!m.flatten().allFinite()) throw std::runtime_error("lstm json: non-finite parameter");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("lstm json: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const ClassificationReport& r) {
  nlohmann::ordered_json j;
  j["labels"] = r.labels;
  j["rmse_definition"] = "sqrt(mean over segments of ||p - onehot||^2 / C)";
  j["overall"] = metrics_json(r.overall);
  j["per_sir"] = nlohmann::ordered_json::array();
  for (const auto& p : r.per_sir) {
    auto e = metrics_json(p.metrics);
    e["sir_db"] = std::isinf(p.sir_db) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(p.sir_db);
    j["per_sir"].push_back(e);
  }
  return j;
}

nlohmann::ordered_json to_json(std::span<const EpochRecord> history) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& e : history) {
    a.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"heldout_accuracy", number_or_null(e.heldout_accuracy)}});
  }
  return a;
}

void write_sweep_csv(std::ostream& os, const ClassificationReport& r) {
  os << "sir_db,class,accuracy,rmse\n";
  for (const auto& p : r.per_sir) {
    os << num(p.sir_db) << ",ALL," << num(p.metrics.accuracy) << ',' << num(p.metrics.rmse) << '\n';
    for (std::size_t c = 0; c < r.labels.size(); ++c) {
      os << num(p.sir_db) << ',' << r.labels[c] << ',' << num(p.metrics.per_class_accuracy[c]) << ','
         << num(p.metrics.per_class_rmse[c]) << '\n';
    }
  }
}

void write_confusion_csv(std::ostream& os, std::span<const std::string> labels, const ClassMetrics& m) {
  os << "true\\predicted";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t r = 0; r < labels.size(); ++r) {
    os << labels[r];
    for (std::size_t c = 0; c < labels.size(); ++c) os << ',' << m.confusion[r][c];
    os << '\n';
  }
}

void write_history_csv(std::ostream& os, std::span<const EpochRecord> history) {
  os << "epoch,train_loss,heldout_accuracy\n";
  for (const auto& e : history) os << e.epoch << ',' << num(e.train_loss) << ',' << num(e.heldout_accuracy) << '\n';
}

}  // namespace rfim::classify
