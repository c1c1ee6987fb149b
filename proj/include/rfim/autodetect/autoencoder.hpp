#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rfim/autodetect/linalg.hpp"
#include "rfim/iqcore/iq_segment.hpp"

namespace rfim::detect {

/// Per-dimension affine map taking the training corpus onto [0.1, 0.9].
/// Values outside the corpus range map outside that interval unclamped.
struct InputScale {
  Vector min;
  Vector max;

  static InputScale fit(const RowMatrix& raw_rows);
  Vector apply(const Vector& raw) const;
  std::size_t dim() const { return static_cast<std::size_t>(min.size()); }
};

/// Interleaved I/Q of a segment: [I0, Q0, I1, Q1, ...].
Vector interleave(const IqSegment& segment);

struct AutoencoderHyper {
  std::size_t hidden_size = 32;
  double l2_weight = 1e-4;
  double sparsity_proportion = 0.1;
  double sparsity_weight = 1.0;
};

/// Single hidden layer: h = sigmoid(W_enc x + b_enc), x_hat = W_dec h + b_dec.
struct SparseAutoencoder {
  RowMatrix w_enc;  // h x d
  Vector b_enc;     // h
  RowMatrix w_dec;  // d x h
  Vector b_dec;     // d
  double l2_weight = 1e-4;
  double sparsity_proportion = 0.1;
  double sparsity_weight = 1.0;
  InputScale input_scale;
  // FNV-1a digests of the training segments, used to flag calibration on
  // training data.
  std::vector<std::uint64_t> training_digests;

  std::size_t input_dim() const { return static_cast<std::size_t>(w_enc.cols()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(w_enc.rows()); }
  std::size_t parameter_count() const;

  /// Parameters in the order w_enc, b_enc, w_dec, b_dec, matrices row-major.
  Vector flatten() const;
  void assign(const Vector& flat);

  Vector encode(const Vector& features) const;
  Vector decode(const Vector& hidden) const;

  /// Weights uniform in +-sqrt(6 / (h + d + 1)), zero biases, identity scale.
  static SparseAutoencoder initialized(std::size_t input_dim, const AutoencoderHyper& hyper, std::uint64_t seed);
};

/// featurize: interleave, then apply the model's stored input scale.
Vector featurize_segment(const IqSegment& segment, const InputScale& scale);

struct LossTerms {
  double reconstruction = 0.0;  // (1/N) sum_rows ||x - x_hat||^2 / d
  double l2 = 0.0;              // lambda (||W_enc||^2 + ||W_dec||^2)
  double sparsity = 0.0;        // beta_s sum_j KL(rho_s || rho_hat_j)
  double total() const { return reconstruction + l2 + sparsity; }
};

struct LossAndGradient {
  double loss = 0.0;
  LossTerms terms;
  Vector gradient;  // same layout as SparseAutoencoder::flatten()
};

inline constexpr double kActivationClamp = 1e-12;

/// Loss and exact gradient over a batch of featurized rows (N x d).
/// Mean activations are clamped to [1e-12, 1 - 1e-12] inside the KL term.
LossAndGradient ae_loss_and_grad(const SparseAutoencoder& model, const RowMatrix& batch);

struct Reconstruction {
  Vector output;
  double mse = 0.0;
};

Reconstruction reconstruct(const SparseAutoencoder& model, const IqSegment& segment);

std::uint64_t segment_digest(const IqSegment& segment);

}  // namespace rfim::detect
