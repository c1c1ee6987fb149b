#include "rfim/lstmclass/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rfim/iqcore/random.hpp"

namespace rfim::classify {
namespace {

template <typename Derived>
void sigmoid_inplace(Eigen::DenseBase<Derived>& a) {
  a.derived().array() = 1.0 / (1.0 + (-a.derived().array()).exp());
}

// tanh(x) = 2 sigmoid(2x) - 1; keeps the activation on the vectorized exp path.
template <typename Derived>
void tanh_inplace(Eigen::DenseBase<Derived>& a) {
  a.derived().array() = 2.0 / (1.0 + (-2.0 * a.derived().array()).exp()) - 1.0;
}

template <typename Derived>
Eigen::MatrixXd tanh_of(const Eigen::MatrixBase<Derived>& a) {
  Eigen::MatrixXd r = a;
  tanh_inplace(r);
  return r;
}

template <typename M>
void copy_out(const M& m, double*& dst) {
  dst = std::copy(m.data(), m.data() + m.size(), dst);
}

template <typename M>
void copy_in(M& m, const double*& src) {
  std::copy(src, src + m.size(), m.data());
  src += m.size();
}

}  // namespace

std::size_t LstmModel::parameter_count() const {
  return static_cast<std::size_t>(w.size() + u.size() + b.size() + w_fc.size() + b_fc.size());
}

Eigen::VectorXd LstmModel::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  double* p = flat.data();
  copy_out(w, p);
  copy_out(u, p);
  copy_out(b, p);
  copy_out(w_fc, p);
  copy_out(b_fc, p);
  return flat;
}

void LstmModel::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw std::invalid_argument("LstmModel::assign: size mismatch");
  }
  const double* p = flat.data();
  copy_in(w, p);
  copy_in(u, p);
  copy_in(b, p);
  copy_in(w_fc, p);
  copy_in(b_fc, p);
}

LstmModel LstmModel::initialized(Eigen::Index hidden, Eigen::Index inputs, std::vector<std::string> labels,
                                 std::uint64_t seed, double forget_bias) {
  if (hidden <= 0 || inputs <= 0 || labels.size() < 2) {
    throw std::invalid_argument("LstmModel: need positive sizes and at least two classes");
  }
  const auto classes = static_cast<Eigen::Index>(labels.size());
  LstmModel m;
  m.w.resize(4 * hidden, inputs);
  m.u.resize(4 * hidden, hidden);
  m.b = Eigen::VectorXd::Zero(4 * hidden);
  m.w_fc.resize(classes, hidden);
  m.b_fc = Eigen::VectorXd::Zero(classes);
  m.labels = std::move(labels);

  Rng rng(seed);
  const double r = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto* mat : {&m.w, &m.u, &m.w_fc}) {
    for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = rng.uniform(-r, r);
  }
  m.gate_b(Gate::forget).setConstant(forget_bias);
  return m;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

Eigen::Index argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Eigen::MatrixXd forward_batch(const LstmModel& model, std::span<const FeatureMatrix* const> batch,
                              ForwardCache* cache) {
  if (batch.empty()) throw std::invalid_argument("lstm forward: empty batch");
  const Eigen::Index H = model.hidden_size();
  const Eigen::Index F = model.input_size();
  const Eigen::Index B = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index T = batch.front()->cols();
  for (const auto* f : batch) {
    if (f->rows() != F || f->cols() != T || T == 0) {
      throw std::invalid_argument("lstm forward: feature shape mismatch");
    }
  }

  Eigen::MatrixXd x(F, T * B);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < B; ++j) x.col(t * B + j) = batch[static_cast<std::size_t>(j)]->col(t);
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(H, B);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(H, B);
  Eigen::MatrixXd a(4 * H, B);
  if (cache) {
    cache->steps = T;
    cache->batch = B;
    cache->gates.resize(4 * H, T * B);
    cache->c.resize(H, T * B);
    cache->h.resize(H, T * B);
  }

  for (Eigen::Index t = 0; t < T; ++t) {
    a.noalias() = model.w * x.middleCols(t * B, B);
    a.noalias() += model.u * h;
    a.colwise() += model.b;
    auto sig = a.topRows(3 * H);
    sigmoid_inplace(sig);
    auto g = a.bottomRows(H);
    tanh_inplace(g);
    c = a.middleRows(H, H).cwiseProduct(c) + a.topRows(H).cwiseProduct(g);
    h = a.middleRows(2 * H, H).cwiseProduct(tanh_of(c));
    if (!c.allFinite() || !h.allFinite()) {
      throw std::runtime_error("lstm forward: non-finite activation at step " + std::to_string(t));
    }
    if (cache) {
      cache->gates.middleCols(t * B, B) = a;
      cache->c.middleCols(t * B, B) = c;
      cache->h.middleCols(t * B, B) = h;
    }
  }

  Eigen::MatrixXd logits = model.w_fc * h;
  logits.colwise() += model.b_fc;
  Eigen::MatrixXd probs(logits.rows(), B);
  for (Eigen::Index j = 0; j < B; ++j) probs.col(j) = softmax(logits.col(j));
  if (!probs.allFinite()) throw std::runtime_error("lstm forward: non-finite output probabilities");
  if (cache) {
    cache->x = std::move(x);
    cache->probs = probs;
  }
  return probs;
}

Eigen::VectorXd lstm_forward(const LstmModel& model, const FeatureMatrix& features, ForwardCache* cache) {
  const FeatureMatrix* one[] = {&features};
  return forward_batch(model, one, cache).col(0);
}

LossAndGradient lstm_backward(const LstmModel& model, const ForwardCache& cache, std::span<const int> targets) {
  const Eigen::Index H = model.hidden_size();
  const Eigen::Index C = model.class_count();
  const Eigen::Index B = cache.batch;
  const Eigen::Index T = cache.steps;
  if (static_cast<Eigen::Index>(targets.size()) != B || cache.gates.cols() != T * B) {
    throw std::invalid_argument("lstm backward: cache and targets disagree");
  }

  LossAndGradient out;
  Eigen::MatrixXd dz = cache.probs;
  for (Eigen::Index j = 0; j < B; ++j) {
    const int y = targets[static_cast<std::size_t>(j)];
    if (y < 0 || y >= C) throw std::invalid_argument("lstm backward: target out of range");
    out.loss -= std::log(cache.probs(y, j));
    dz(y, j) -= 1.0;
  }
  out.loss /= static_cast<double>(B);
  dz /= static_cast<double>(B);

  const auto h_last = cache.h.middleCols((T - 1) * B, B);
  const Eigen::MatrixXd d_wfc = dz * h_last.transpose();
  const Eigen::VectorXd d_bfc = dz.rowwise().sum();

  // Pre-activation gradients for every step, later reduced in one product.
  Eigen::MatrixXd da(4 * H, T * B);
  Eigen::MatrixXd dh = model.w_fc.transpose() * dz;
  Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(H, B);
  const Eigen::MatrixXd zero_state = Eigen::MatrixXd::Zero(H, B);

  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const auto gates = cache.gates.middleCols(t * B, B);
    const auto i = gates.topRows(H).array();
    const auto f = gates.middleRows(H, H).array();
    const auto o = gates.middleRows(2 * H, H).array();
    const auto g = gates.bottomRows(H).array();
    const Eigen::ArrayXXd tc = tanh_of(cache.c.middleCols(t * B, B)).array();
    const Eigen::Ref<const Eigen::MatrixXd> c_prev_m =
        t > 0 ? Eigen::Ref<const Eigen::MatrixXd>(cache.c.middleCols((t - 1) * B, B))
              : Eigen::Ref<const Eigen::MatrixXd>(zero_state);
    const auto c_prev = c_prev_m.array();

    dc.array() += dh.array() * o * (1.0 - tc.square());
    auto step = da.middleCols(t * B, B);
    step.topRows(H).array() = dc.array() * g * i * (1.0 - i);
    step.middleRows(H, H).array() = dc.array() * c_prev * f * (1.0 - f);
    step.middleRows(2 * H, H).array() = dh.array() * tc * o * (1.0 - o);
    step.bottomRows(H).array() = dc.array() * i * (1.0 - g.square());
    dc.array() *= f;
    dh.noalias() = model.u.transpose() * step;
  }

  // h_{t-1} for every column; zero at t = 0.
  Eigen::MatrixXd h_prev(H, T * B);
  h_prev.leftCols(B).setZero();
  if (T > 1) h_prev.rightCols((T - 1) * B) = cache.h.leftCols((T - 1) * B);

  const Eigen::MatrixXd d_w = da * cache.x.transpose();
  const Eigen::MatrixXd d_u = da * h_prev.transpose();
  const Eigen::VectorXd d_b = da.rowwise().sum();

  out.gradient.resize(static_cast<Eigen::Index>(model.parameter_count()));
  double* p = out.gradient.data();
  copy_out(d_w, p);
  copy_out(d_u, p);
  copy_out(d_b, p);
  copy_out(d_wfc, p);
  copy_out(d_bfc, p);
  return out;
}

}  // namespace rfim::classify
