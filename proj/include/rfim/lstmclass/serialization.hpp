#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "rfim/lstmclass/classifier.hpp"

namespace rfim::classify {

inline constexpr int kLstmFormatVersion = 1;

/// Versioned JSON with per-gate row-major weight arrays, class labels and
/// normalization statistics.
nlohmann::ordered_json to_json(const LstmModel& model);
LstmModel lstm_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const ClassificationReport& report);
nlohmann::ordered_json to_json(std::span<const EpochRecord> history);

/// `sir_db,class,accuracy,rmse`; class ALL carries the overall metrics.
void write_sweep_csv(std::ostream& os, const ClassificationReport& report);

/// Rows are true classes, columns predicted classes.
void write_confusion_csv(std::ostream& os, std::span<const std::string> labels, const ClassMetrics& metrics);

/// `epoch,train_loss,heldout_accuracy`.
void write_history_csv(std::ostream& os, std::span<const EpochRecord> history);

}  // namespace rfim::classify
