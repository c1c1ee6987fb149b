#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rfim/lstmclass/features.hpp"

namespace rfim::classify {

enum class Gate { input = 0, forget = 1, output = 2, cell = 3 };

/// Single-layer LSTM with a dense softmax head on the last hidden state.
/// Gate parameters are stacked in row blocks of H in the order
/// input, forget, output, cell.
struct LstmModel {
  Eigen::MatrixXd w;     // 4H x F
  Eigen::MatrixXd u;     // 4H x H
  Eigen::VectorXd b;     // 4H
  Eigen::MatrixXd w_fc;  // C x H
  Eigen::VectorXd b_fc;  // C
  std::vector<std::string> labels;
  NormStats norm;

  Eigen::Index hidden_size() const { return u.cols(); }
  Eigen::Index input_size() const { return w.cols(); }
  Eigen::Index class_count() const { return w_fc.rows(); }

  auto gate_w(Gate g) { return w.middleRows(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }
  auto gate_w(Gate g) const { return w.middleRows(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }
  auto gate_u(Gate g) { return u.middleRows(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }
  auto gate_u(Gate g) const { return u.middleRows(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }
  auto gate_b(Gate g) { return b.segment(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }
  auto gate_b(Gate g) const { return b.segment(static_cast<Eigen::Index>(g) * hidden_size(), hidden_size()); }

  std::size_t parameter_count() const;
  /// Layout: w, u, b, w_fc, b_fc, each in column-major storage order.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);

  /// Input and recurrent weights uniform in +-1/sqrt(H), head likewise;
  /// biases zero except the forget gate.
  static LstmModel initialized(Eigen::Index hidden, Eigen::Index inputs, std::vector<std::string> labels,
                               std::uint64_t seed, double forget_bias = 1.0);
};

/// Activations retained for backpropagation. Column t*B + j of each
/// matrix belongs to sequence j at step t.
struct ForwardCache {
  Eigen::Index steps = 0;
  Eigen::Index batch = 0;
  Eigen::MatrixXd x;      // F x TB
  Eigen::MatrixXd gates;  // 4H x TB, post-activation
  Eigen::MatrixXd c;      // H x TB
  Eigen::MatrixXd h;      // H x TB
  Eigen::MatrixXd probs;  // C x B
};

/// Softmax with max subtraction.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

/// Index of the largest entry; ties go to the lowest index.
Eigen::Index argmax(const Eigen::VectorXd& v);

/// Class probabilities for a batch of equal-length sequences (C x B).
/// Fills `cache` when non-null. Throws on non-finite activations.
Eigen::MatrixXd forward_batch(const LstmModel& model, std::span<const FeatureMatrix* const> batch,
                              ForwardCache* cache = nullptr);

Eigen::VectorXd lstm_forward(const LstmModel& model, const FeatureMatrix& features, ForwardCache* cache = nullptr);

struct LossAndGradient {
  double loss = 0.0;         // mean cross-entropy over the batch
  Eigen::VectorXd gradient;  // LstmModel::flatten() layout
};

/// Exact gradient of the mean cross-entropy by backpropagation through time.
LossAndGradient lstm_backward(const LstmModel& model, const ForwardCache& cache, std::span<const int> targets);

}  // namespace rfim::classify
