#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfim/lstmclass/adam.hpp"
#include "rfim/lstmclass/lstm.hpp"
#include "rfim/wavegen/dataset.hpp"

namespace rfim::classify {

/// A dataset label outside the model's class list.
class LabelMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> default_labels();  // LTE, UMTS, GSM

enum class LrSchedule { constant, cosine };

struct ClassifierTrainConfig {
  Eigen::Index hidden_size = 128;
  double forget_bias = 3.0;  // initial forget-gate bias; large values favour long memory early on
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double validation_fraction = 0.1;
  double clip_norm = 1.0;  // rescale gradients whose L2 norm exceeds this; 0 disables
  AdamHyper adam;
  LrSchedule schedule = LrSchedule::cosine;  // cosine: anneal to zero over all epochs
  std::vector<std::string> labels = default_labels();
  std::uint64_t seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double heldout_accuracy = 0.0;  // NaN without a held-out split
};

struct ClassifierTrainResult {
  LstmModel model;
  std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam on mean cross-entropy. A seeded shuffle splits off the
/// held-out fraction; normalization statistics come from the training
/// split alone, which must contain every class.
ClassifierTrainResult train_classifier(const wave::LabeledDataset& dataset, const ClassifierTrainConfig& config,
                                       const EpochCallback& on_epoch = {});

/// Class index of each item; throws LabelMismatch for unknown labels.
std::vector<int> label_indices(const wave::LabeledDataset& dataset, std::span<const std::string> labels);

struct ClassMetrics {
  std::vector<std::vector<std::size_t>> confusion;  // rows true, columns predicted
  std::size_t total = 0;
  double accuracy = 0.0;                   // trace / total
  std::vector<double> per_class_accuracy;  // NaN for classes absent from the set
  double rmse = 0.0;                       // sqrt(mean ||p - onehot||^2 / C)
  std::vector<double> per_class_rmse;
};

struct SirPoint {
  double sir_db = 0.0;
  ClassMetrics metrics;
};

struct ClassificationReport {
  std::vector<std::string> labels;
  ClassMetrics overall;
  std::vector<SirPoint> per_sir;  // ascending SIR
};

/// Metrics from class probabilities (C x N), true indices and SIR tags.
ClassificationReport score(std::span<const std::string> labels, const Eigen::MatrixXd& probs,
                           std::span<const int> truth, std::span<const double> sir_db);

/// Probabilities for every item (C x N).
Eigen::MatrixXd predict(const LstmModel& model, const wave::LabeledDataset& dataset);

ClassificationReport evaluate(const LstmModel& model, const wave::LabeledDataset& dataset);

/// Builds a mixed evaluation set over `sir_list_db` and evaluates it.
ClassificationReport sir_sweep(const LstmModel& model, std::span<const wave::WaveformSpec> classes,
                               const wave::WaveformSpec& intended, std::span<const double> sir_list_db,
                               std::size_t segments_per_point, std::uint64_t seed, double snr_db = 20.0);

}  // namespace rfim::classify
