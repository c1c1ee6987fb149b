#include "rfim/lstmclass/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "rfim/iqcore/random.hpp"

namespace rfim::classify {
namespace {

constexpr std::size_t kInferenceBatch = 64;

std::vector<FeatureMatrix> features_of(const wave::LabeledDataset& ds, std::span<const std::size_t> idx,
                                       const NormStats& norm) {
  std::vector<FeatureMatrix> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(extract_features(ds.items[i].segment, norm));
  return out;
}

Eigen::MatrixXd predict_features(const LstmModel& model, const std::vector<FeatureMatrix>& feats) {
  Eigen::MatrixXd probs(model.class_count(), static_cast<Eigen::Index>(feats.size()));
  std::vector<const FeatureMatrix*> ptrs;
  for (std::size_t start = 0; start < feats.size(); start += kInferenceBatch) {
    const std::size_t end = std::min(feats.size(), start + kInferenceBatch);
    ptrs.clear();
    for (std::size_t k = start; k < end; ++k) ptrs.push_back(&feats[k]);
    probs.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
        forward_batch(model, ptrs);
  }
  return probs;
}

ClassMetrics metrics_for(std::size_t classes, const Eigen::MatrixXd& probs, std::span<const int> truth,
                         std::span<const std::size_t> members) {
  ClassMetrics m;
  m.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  std::vector<double> sq(classes, 0.0);
  std::vector<std::size_t> count(classes, 0);
  double sq_total = 0.0;
  for (std::size_t n : members) {
    const int y = truth[n];
    const auto col = probs.col(static_cast<Eigen::Index>(n));
    const auto pred = static_cast<std::size_t>(argmax(col));
    ++m.confusion[static_cast<std::size_t>(y)][pred];
    Eigen::VectorXd diff = col;
    diff[y] -= 1.0;
    const double e = diff.squaredNorm() / static_cast<double>(classes);
    sq_total += e;
    sq[static_cast<std::size_t>(y)] += e;
    ++count[static_cast<std::size_t>(y)];
  }
  m.total = members.size();
  std::size_t trace = 0;
  for (std::size_t c = 0; c < classes; ++c) trace += m.confusion[c][c];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.accuracy = m.total ? static_cast<double>(trace) / static_cast<double>(m.total) : nan;
  m.rmse = m.total ? std::sqrt(sq_total / static_cast<double>(m.total)) : nan;
  for (std::size_t c = 0; c < classes; ++c) {
    const auto n = static_cast<double>(count[c]);
    m.per_class_accuracy.push_back(count[c] ? static_cast<double>(m.confusion[c][c]) / n : nan);
    m.per_class_rmse.push_back(count[c] ? std::sqrt(sq[c] / n) : nan);
  }
  return m;
}

}  // namespace

std::vector<std::string> default_labels() {
  return {"LTE", "UMTS", "GSM"};
}

std::vector<int> label_indices(const wave::LabeledDataset& dataset, std::span<const std::string> labels) {
  std::vector<int> out;
  out.reserve(dataset.size());
  for (const auto& item : dataset.items) {
    const auto it = std::find(labels.begin(), labels.end(), item.label);
    if (it == labels.end()) throw LabelMismatch("label '" + item.label + "' is not a model class");
    out.push_back(static_cast<int>(it - labels.begin()));
  }
  return out;
}

ClassifierTrainResult train_classifier(const wave::LabeledDataset& dataset, const ClassifierTrainConfig& config,
                                       const EpochCallback& on_epoch) {
  if (config.batch_size == 0 || config.epochs == 0) throw std::invalid_argument("train_classifier: zero batch size or epochs");
  if (!(config.validation_fraction >= 0.0 && config.validation_fraction < 1.0)) {
    throw std::invalid_argument("train_classifier: validation_fraction must lie in [0, 1)");
  }
  const auto targets = label_indices(dataset, config.labels);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng(derive_seed(config.seed, 0)).shuffle(order);
  const auto held = static_cast<std::size_t>(std::floor(config.validation_fraction * static_cast<double>(order.size())));
  const std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(held));
  const std::vector<std::size_t> held_idx(order.end() - static_cast<std::ptrdiff_t>(held), order.end());

  std::vector<bool> present(config.labels.size(), false);
  for (std::size_t i : train_idx) present[static_cast<std::size_t>(targets[i])] = true;
  for (std::size_t c = 0; c < present.size(); ++c) {
    if (!present[c]) throw std::invalid_argument("train_classifier: class " + config.labels[c] + " absent from training split");
  }

  std::vector<IqSegment> train_segments;
  train_segments.reserve(train_idx.size());
  for (std::size_t i : train_idx) train_segments.push_back(dataset.items[i].segment);

  ClassifierTrainResult result;
  result.model = LstmModel::initialized(config.hidden_size, kFeatureChannels, config.labels, derive_seed(config.seed, 1),
                                              config.forget_bias);
  result.model.norm = fit_norm_stats(train_segments);
  train_segments.clear();

  const auto train_feats = features_of(dataset, train_idx, result.model.norm);
  const auto held_feats = features_of(dataset, held_idx, result.model.norm);

  Eigen::VectorXd theta = result.model.flatten();
  auto adam = AdamState::zeros(theta.size());
  std::vector<std::size_t> perm(train_idx.size());
  std::vector<const FeatureMatrix*> batch;
  std::vector<int> batch_targets;
  ForwardCache cache;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng(derive_seed(config.seed, 1 + epoch)).shuffle(perm);
    double loss_sum = 0.0;
    AdamHyper adam_hyper = config.adam;
    if (config.schedule == LrSchedule::cosine) {
      const double progress = static_cast<double>(epoch - 1) / static_cast<double>(config.epochs);
      adam_hyper.learning_rate *= 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
    }
    for (std::size_t start = 0; start < perm.size(); start += config.batch_size) {
      const std::size_t end = std::min(perm.size(), start + config.batch_size);
      batch.clear();
      batch_targets.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(&train_feats[perm[k]]);
        batch_targets.push_back(targets[train_idx[perm[k]]]);
      }
      forward_batch(result.model, batch, &cache);
      const auto lg = lstm_backward(result.model, cache, batch_targets);
      loss_sum += lg.loss * static_cast<double>(end - start);
      const double norm = lg.gradient.norm();
      if (config.clip_norm > 0.0 && norm > config.clip_norm) {
        adam_step(theta, lg.gradient * (config.clip_norm / norm), adam, adam_hyper);
      } else {
        adam_step(theta, lg.gradient, adam, adam_hyper);
      }
      result.model.assign(theta);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(perm.size());
    rec.heldout_accuracy = std::numeric_limits<double>::quiet_NaN();
    if (!held_feats.empty()) {
      const auto probs = predict_features(result.model, held_feats);
      std::size_t hits = 0;
      for (std::size_t k = 0; k < held_idx.size(); ++k) {
        if (argmax(probs.col(static_cast<Eigen::Index>(k))) == targets[held_idx[k]]) ++hits;
      }
      rec.heldout_accuracy = static_cast<double>(hits) / static_cast<double>(held_idx.size());
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

ClassificationReport score(std::span<const std::string> labels, const Eigen::MatrixXd& probs,
                           std::span<const int> truth, std::span<const double> sir_db) {
  const std::size_t n = truth.size();
  if (probs.cols() != static_cast<Eigen::Index>(n) || sir_db.size() != n ||
      probs.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("score: shape mismatch");
  }
  ClassificationReport r;
  r.labels.assign(labels.begin(), labels.end());
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  r.overall = metrics_for(labels.size(), probs, truth, all);

  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < n; ++k) groups[sir_db[k]].push_back(k);
  for (const auto& [sir, members] : groups) r.per_sir.push_back({sir, metrics_for(labels.size(), probs, truth, members)});
  return r;
}

Eigen::MatrixXd predict(const LstmModel& model, const wave::LabeledDataset& dataset) {
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return predict_features(model, features_of(dataset, idx, model.norm));
}

ClassificationReport evaluate(const LstmModel& model, const wave::LabeledDataset& dataset) {
  if (dataset.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
  const auto truth = label_indices(dataset, model.labels);
  std::vector<double> sir;
  sir.reserve(dataset.size());
  for (const auto& item : dataset.items) sir.push_back(item.sir_db);
  return score(model.labels, predict(model, dataset), truth, sir);
}

ClassificationReport sir_sweep(const LstmModel& model, std::span<const wave::WaveformSpec> classes,
                               const wave::WaveformSpec& intended, std::span<const double> sir_list_db,
                               std::size_t segments_per_point, std::uint64_t seed, double snr_db) {
  if (sir_list_db.empty()) throw std::invalid_argument("sir_sweep: empty SIR list");
  return evaluate(model, wave::build_dataset(classes, intended, sir_list_db, segments_per_point, seed, snr_db));
}

}  // namespace rfim::classify
