#include "rfim/autodetect/autoencoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rfim/iqcore/random.hpp"

namespace rfim::detect {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double kl(double p, double q) { return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q)); }

}  // namespace

InputScale InputScale::fit(const RowMatrix& raw_rows) {
  if (raw_rows.rows() == 0) throw std::invalid_argument("InputScale::fit: empty corpus");
  return {raw_rows.colwise().minCoeff().transpose(), raw_rows.colwise().maxCoeff().transpose()};
}

Vector InputScale::apply(const Vector& raw) const {
  if (raw.size() != min.size()) throw std::invalid_argument("InputScale: dimension mismatch");
  Vector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double range = max[i] - min[i];
    out[i] = range > 0.0 ? 0.1 + 0.8 * (raw[i] - min[i]) / range : 0.5;
  }
  return out;
}

Vector interleave(const IqSegment& segment) {
  Vector v(static_cast<Eigen::Index>(2 * segment.size()));
  for (std::size_t n = 0; n < segment.size(); ++n) {
    v[static_cast<Eigen::Index>(2 * n)] = segment[n].real();
    v[static_cast<Eigen::Index>(2 * n + 1)] = segment[n].imag();
  }
  return v;
}

Vector featurize_segment(const IqSegment& segment, const InputScale& scale) {
  if (2 * segment.size() != scale.dim()) {
    throw std::invalid_argument("featurize_segment: segment has " + std::to_string(segment.size()) +
                                " samples, model expects " + std::to_string(scale.dim() / 2));
  }
  return scale.apply(interleave(segment));
}

std::size_t SparseAutoencoder::parameter_count() const {
  return static_cast<std::size_t>(w_enc.size() + b_enc.size() + w_dec.size() + b_dec.size());
}

Vector SparseAutoencoder::flatten() const {
  Vector flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index o = 0;
  flat.segment(o, w_enc.size()) = Eigen::Map<const Vector>(w_enc.data(), w_enc.size());
  o += w_enc.size();
  flat.segment(o, b_enc.size()) = b_enc;
  o += b_enc.size();
  flat.segment(o, w_dec.size()) = Eigen::Map<const Vector>(w_dec.data(), w_dec.size());
  o += w_dec.size();
  flat.segment(o, b_dec.size()) = b_dec;
  return flat;
}

void SparseAutoencoder::assign(const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw std::invalid_argument("SparseAutoencoder::assign: wrong parameter count");
  }
  Eigen::Index o = 0;
  Eigen::Map<Vector>(w_enc.data(), w_enc.size()) = flat.segment(o, w_enc.size());
  o += w_enc.size();
  b_enc = flat.segment(o, b_enc.size());
  o += b_enc.size();
  Eigen::Map<Vector>(w_dec.data(), w_dec.size()) = flat.segment(o, w_dec.size());
  o += w_dec.size();
  b_dec = flat.segment(o, b_dec.size());
}

Vector SparseAutoencoder::encode(const Vector& features) const {
  return (w_enc * features + b_enc).unaryExpr(&sigmoid);
}

Vector SparseAutoencoder::decode(const Vector& hidden) const { return w_dec * hidden + b_dec; }

SparseAutoencoder SparseAutoencoder::initialized(std::size_t d, const AutoencoderHyper& hyper, std::uint64_t seed) {
  const auto h = static_cast<Eigen::Index>(hyper.hidden_size);
  const auto di = static_cast<Eigen::Index>(d);
  SparseAutoencoder m;
  m.w_enc = RowMatrix(h, di);
  m.b_enc = Vector::Zero(h);
  m.w_dec = RowMatrix(di, h);
  m.b_dec = Vector::Zero(di);
  m.l2_weight = hyper.l2_weight;
  m.sparsity_proportion = hyper.sparsity_proportion;
  m.sparsity_weight = hyper.sparsity_weight;
  m.input_scale = {Vector::Constant(di, 0.0), Vector::Constant(di, 1.0)};

  Rng rng(seed);
  const double r = std::sqrt(6.0 / static_cast<double>(hyper.hidden_size + d + 1));
  for (Eigen::Index i = 0; i < m.w_enc.size(); ++i) m.w_enc.data()[i] = rng.uniform(-r, r);
  for (Eigen::Index i = 0; i < m.w_dec.size(); ++i) m.w_dec.data()[i] = rng.uniform(-r, r);
  return m;
}

LossAndGradient ae_loss_and_grad(const SparseAutoencoder& m, const RowMatrix& x) {
  const auto n = x.rows();
  const auto d = x.cols();
  if (n == 0) throw std::invalid_argument("ae_loss_and_grad: empty batch");
  if (static_cast<std::size_t>(d) != m.input_dim()) {
    throw std::invalid_argument("ae_loss_and_grad: batch width does not match model");
  }
  const double inv_nd = 1.0 / (static_cast<double>(n) * static_cast<double>(d));

  // Forward: rows are samples.
  RowMatrix act = (x * m.w_enc.transpose()).rowwise() + m.b_enc.transpose();
  act = act.unaryExpr(&sigmoid);
  RowMatrix err = (act * m.w_dec.transpose()).rowwise() + m.b_dec.transpose();
  err -= x;

  LossAndGradient out;
  out.terms.reconstruction = err.squaredNorm() * inv_nd;
  out.terms.l2 = m.l2_weight * (m.w_enc.squaredNorm() + m.w_dec.squaredNorm());

  const Vector mean_act = act.colwise().mean().transpose();
  Vector d_mean = Vector::Zero(mean_act.size());
  if (m.sparsity_weight != 0.0) {
    const double p = m.sparsity_proportion;
    for (Eigen::Index j = 0; j < mean_act.size(); ++j) {
      const double q = std::clamp(mean_act[j], kActivationClamp, 1.0 - kActivationClamp);
      out.terms.sparsity += m.sparsity_weight * kl(p, q);
      d_mean[j] = m.sparsity_weight * (-p / q + (1.0 - p) / (1.0 - q));
    }
  }
  out.loss = out.terms.total();

  // Backward.
  const RowMatrix d_out = 2.0 * inv_nd * err;  // N x d
  RowMatrix d_act = d_out * m.w_dec;           // N x h
  d_act.rowwise() += (d_mean / static_cast<double>(n)).transpose();
  const RowMatrix d_pre = d_act.cwiseProduct(act.cwiseProduct((1.0 - act.array()).matrix()));

  const RowMatrix g_w_enc = d_pre.transpose() * x + 2.0 * m.l2_weight * m.w_enc;
  const Vector g_b_enc = d_pre.colwise().sum().transpose();
  const RowMatrix g_w_dec = d_out.transpose() * act + 2.0 * m.l2_weight * m.w_dec;
  const Vector g_b_dec = d_out.colwise().sum().transpose();

  out.gradient.resize(static_cast<Eigen::Index>(m.parameter_count()));
  Eigen::Index o = 0;
  out.gradient.segment(o, g_w_enc.size()) = Eigen::Map<const Vector>(g_w_enc.data(), g_w_enc.size());
  o += g_w_enc.size();
  out.gradient.segment(o, g_b_enc.size()) = g_b_enc;
  o += g_b_enc.size();
  out.gradient.segment(o, g_w_dec.size()) = Eigen::Map<const Vector>(g_w_dec.data(), g_w_dec.size());
  o += g_w_dec.size();
  out.gradient.segment(o, g_b_dec.size()) = g_b_dec;
  return out;
}

Reconstruction reconstruct(const SparseAutoencoder& model, const IqSegment& segment) {
  const Vector x = featurize_segment(segment, model.input_scale);
  Reconstruction r;
  r.output = model.decode(model.encode(x));
  r.mse = (r.output - x).squaredNorm() / static_cast<double>(x.size());
  return r;
}

std::uint64_t segment_digest(const IqSegment& segment) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& s : segment.samples()) {
    feed(s.real());
    feed(s.imag());
  }
  feed(segment.sample_rate_hz());
  return h;
}

}  // namespace rfim::detect
