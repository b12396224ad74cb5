// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Recurrent sequence encoder used for both the comment and the translation
// side: a single-layer LSTM over shared word embeddings, attention logits
// from an affine projection dotted with a learned context vector, and
// attention-weighted pooling of the hidden states into one embedding.
//
// Everything is templated on the scalar so the exact same code path can be
// instantiated in double for finite-difference verification while training
// and artifacts stay in 32-bit floats.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "transearch/errors.hpp"
#include "transearch/rng.hpp"
#include "transearch/types.hpp"

namespace transearch {

// Gate rows are stacked [input; forget; candidate; output], each block of
// size h, so the combined kernels are 4h x m and 4h x h.
template <typename Scalar>
struct EncoderParams {
  MatrixX<Scalar> input_weights;      // 4h x m
  MatrixX<Scalar> recurrent_weights;  // 4h x h
  VectorX<Scalar> gate_bias;          // 4h
  MatrixX<Scalar> attention_weights;  // h x h, the affine projection
  VectorX<Scalar> attention_bias;     // h
  VectorX<Scalar> context_vector;     // h

  Index hidden_size() const { return recurrent_weights.cols(); }
  Index input_size() const { return input_weights.cols(); }

  static EncoderParams zeros(Index embed_dim, Index hidden_dim) {
    EncoderParams p;
    p.input_weights = MatrixX<Scalar>::Zero(4 * hidden_dim, embed_dim);
    p.recurrent_weights = MatrixX<Scalar>::Zero(4 * hidden_dim, hidden_dim);
    p.gate_bias = VectorX<Scalar>::Zero(4 * hidden_dim);
    p.attention_weights = MatrixX<Scalar>::Zero(hidden_dim, hidden_dim);
    p.attention_bias = VectorX<Scalar>::Zero(hidden_dim);
    p.context_vector = VectorX<Scalar>::Zero(hidden_dim);
    return p;
  }
};

template <typename Scalar>
EncoderParams<Scalar> init_encoder(Index embed_dim, Index hidden_dim, Rng& rng) {
  EncoderParams<Scalar> p = EncoderParams<Scalar>::zeros(embed_dim, hidden_dim);
  auto fill = [&rng](auto& tensor) {
    for (Index i = 0; i < tensor.rows(); ++i)
      for (Index j = 0; j < tensor.cols(); ++j)
        tensor(i, j) = static_cast<Scalar>(rng.uniform(-0.1, 0.1));
  };
  fill(p.input_weights);
  fill(p.recurrent_weights);
  fill(p.gate_bias);
  fill(p.attention_weights);
  fill(p.attention_bias);
  fill(p.context_vector);
  return p;
}

/// Forward outputs plus everything the backward pass needs. Padding
/// positions carry the previous state through unchanged and get attention
/// weight zero, so trailing padding never changes the embedding.
template <typename Scalar>
struct EncodeResult {
  VectorX<Scalar> embedding;   // pooled output e, length h
  MatrixX<Scalar> hidden;      // h x N
  VectorX<Scalar> attention;   // length N, zero at padding

  MatrixX<Scalar> inputs;      // m x N, embedding rows after optional dropout
  MatrixX<Scalar> gates;       // 4h x N, post-activation
  MatrixX<Scalar> cell;        // h x N
  MatrixX<Scalar> cell_tanh;   // h x N
  MatrixX<Scalar> attn_proj;   // h x N, Wa h + ba
  std::vector<int> ids;
  std::vector<std::uint8_t> pad_mask;  // 1 marks a padding position
};

template <typename Scalar>
struct EncoderGrads {
  MatrixX<Scalar> input_weights;
  MatrixX<Scalar> recurrent_weights;
  VectorX<Scalar> gate_bias;
  MatrixX<Scalar> attention_weights;
  VectorX<Scalar> attention_bias;
  VectorX<Scalar> context_vector;

  static EncoderGrads zeros_like(const EncoderParams<Scalar>& p) {
    EncoderGrads g;
    g.input_weights = MatrixX<Scalar>::Zero(p.input_weights.rows(), p.input_weights.cols());
    g.recurrent_weights =
        MatrixX<Scalar>::Zero(p.recurrent_weights.rows(), p.recurrent_weights.cols());
    g.gate_bias = VectorX<Scalar>::Zero(p.gate_bias.size());
    g.attention_weights =
        MatrixX<Scalar>::Zero(p.attention_weights.rows(), p.attention_weights.cols());
    g.attention_bias = VectorX<Scalar>::Zero(p.attention_bias.size());
    g.context_vector = VectorX<Scalar>::Zero(p.context_vector.size());
    return g;
  }
};

namespace detail {
template <typename Scalar>
VectorX<Scalar> sigmoid(const VectorX<Scalar>& x) {
  return ((-x.array()).exp() + Scalar(1)).inverse().matrix();
}
}  // namespace detail

/// Inverted dropout mask: entries are 0 with probability `rate`, otherwise
/// 1/(1-rate). Drawn column by column.
template <typename Scalar>
MatrixX<Scalar> make_dropout_mask(Index rows, Index cols, double rate, Rng& rng) {
  MatrixX<Scalar> mask(rows, cols);
  const Scalar keep_scale = static_cast<Scalar>(1.0 / (1.0 - rate));
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r)
      mask(r, c) = rng.uniform() < rate ? Scalar(0) : keep_scale;
  return mask;
}

/// Train mode applies an inverted-dropout mask; eval mode (or rate 0) is the
/// identity.
template <typename Scalar>
void dropout_apply(MatrixX<Scalar>& vecs, double rate, std::uint64_t seed, bool train) {
  if (!train || rate <= 0.0) return;
  Rng rng(seed);
  vecs.array() *= make_dropout_mask<Scalar>(vecs.rows(), vecs.cols(), rate, rng).array();
}

/// Runs the encoder. `pad_mask[i]` nonzero marks position i as padding;
/// `dropout_mask` (m x N), when given, is applied to the input embeddings.
/// Throws EmptySequence when nothing remains after masking and ShapeMismatch
/// when ids and mask lengths differ.
template <typename Scalar>
EncodeResult<Scalar> encode(const EncoderParams<Scalar>& params,
                            const MatrixX<Scalar>& embeddings, std::span<const int> ids,
                            std::span<const std::uint8_t> pad_mask,
                            const MatrixX<Scalar>* dropout_mask = nullptr) {
  const Index n = static_cast<Index>(ids.size());
  if (pad_mask.size() != ids.size())
    throw ShapeMismatch("ids and pad_mask lengths differ");
  Index valid = 0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!pad_mask[i]) ++valid;
  if (n == 0 || valid == 0) throw EmptySequence();

  const Index h = params.hidden_size();
  const Index m = params.input_size();

  EncodeResult<Scalar> r;
  r.ids.assign(ids.begin(), ids.end());
  r.pad_mask.assign(pad_mask.begin(), pad_mask.end());
  r.inputs = MatrixX<Scalar>::Zero(m, n);
  r.gates = MatrixX<Scalar>::Zero(4 * h, n);
  r.cell = MatrixX<Scalar>::Zero(h, n);
  r.cell_tanh = MatrixX<Scalar>::Zero(h, n);
  r.hidden = MatrixX<Scalar>::Zero(h, n);
  r.attn_proj = MatrixX<Scalar>::Zero(h, n);
  r.attention = VectorX<Scalar>::Zero(n);

  VectorX<Scalar> h_prev = VectorX<Scalar>::Zero(h);
  VectorX<Scalar> c_prev = VectorX<Scalar>::Zero(h);
  for (Index t = 0; t < n; ++t) {
    if (pad_mask[static_cast<std::size_t>(t)]) {
      r.hidden.col(t) = h_prev;
      r.cell.col(t) = c_prev;
      continue;
    }
    VectorX<Scalar> x = embeddings.row(ids[static_cast<std::size_t>(t)]).transpose();
    if (dropout_mask != nullptr) x.array() *= dropout_mask->col(t).array();
    r.inputs.col(t) = x;

    const VectorX<Scalar> pre =
        params.input_weights * x + params.recurrent_weights * h_prev + params.gate_bias;
    VectorX<Scalar> gates(4 * h);
    gates.segment(0, h) = detail::sigmoid<Scalar>(pre.segment(0, h));          // input
    gates.segment(h, h) = detail::sigmoid<Scalar>(pre.segment(h, h));          // forget
    gates.segment(2 * h, h) = pre.segment(2 * h, h).array().tanh().matrix();   // candidate
    gates.segment(3 * h, h) = detail::sigmoid<Scalar>(pre.segment(3 * h, h));  // output

    const VectorX<Scalar> c = (gates.segment(h, h).array() * c_prev.array() +
                               gates.segment(0, h).array() * gates.segment(2 * h, h).array())
                                  .matrix();
    const VectorX<Scalar> c_tanh = c.array().tanh().matrix();
    const VectorX<Scalar> hidden = (gates.segment(3 * h, h).array() * c_tanh.array()).matrix();

    r.gates.col(t) = gates;
    r.cell.col(t) = c;
    r.cell_tanh.col(t) = c_tanh;
    r.hidden.col(t) = hidden;
    h_prev = hidden;
    c_prev = c;
  }

  // attention over non-padding positions, numerically shifted softmax
  VectorX<Scalar> logits = VectorX<Scalar>::Zero(n);
  Scalar max_logit = std::numeric_limits<Scalar>::lowest();
  for (Index t = 0; t < n; ++t) {
    if (r.pad_mask[static_cast<std::size_t>(t)]) continue;
    r.attn_proj.col(t) = params.attention_weights * r.hidden.col(t) + params.attention_bias;
    logits(t) = r.attn_proj.col(t).dot(params.context_vector);
    max_logit = std::max(max_logit, logits(t));
  }
  Scalar denom = Scalar(0);
  for (Index t = 0; t < n; ++t) {
    if (r.pad_mask[static_cast<std::size_t>(t)]) continue;
    r.attention(t) = std::exp(logits(t) - max_logit);
    denom += r.attention(t);
  }
  r.attention /= denom;

  r.embedding = r.hidden * r.attention;
  return r;
}

/// Reverse-mode gradients of `upstream . e` with respect to all encoder
/// parameters; input-embedding gradients accumulate into `embedding_grads`
/// (rows of non-padding token ids only). When `dropout_mask` was used in the
/// forward pass the same mask must be passed here. Throws CacheMismatch when
/// the cache does not correspond to (ids, pad_mask).
template <typename Scalar>
void encode_backward(const EncoderParams<Scalar>& params, std::span<const int> ids,
                     std::span<const std::uint8_t> pad_mask, const EncodeResult<Scalar>& cache,
                     const VectorX<Scalar>& upstream, EncoderGrads<Scalar>& grads,
                     MatrixX<Scalar>& embedding_grads,
                     const MatrixX<Scalar>* dropout_mask = nullptr) {
  const Index n = static_cast<Index>(ids.size());
  if (cache.ids.size() != ids.size() ||
      !std::equal(ids.begin(), ids.end(), cache.ids.begin()) ||
      cache.pad_mask.size() != pad_mask.size() ||
      !std::equal(pad_mask.begin(), pad_mask.end(), cache.pad_mask.begin()))
    throw CacheMismatch();

  const Index h = params.hidden_size();

  // pooling: e = H * alpha
  VectorX<Scalar> d_alpha = cache.hidden.transpose() * upstream;
  MatrixX<Scalar> d_hidden = upstream * cache.attention.transpose();  // h x N

  // softmax over non-padding positions
  Scalar weighted = Scalar(0);
  for (Index t = 0; t < n; ++t)
    if (!pad_mask[static_cast<std::size_t>(t)]) weighted += cache.attention(t) * d_alpha(t);
  for (Index t = 0; t < n; ++t) {
    if (pad_mask[static_cast<std::size_t>(t)]) continue;
    const Scalar d_logit = cache.attention(t) * (d_alpha(t) - weighted);
    // logit = (Wa h + ba) . u
    grads.attention_weights += d_logit * params.context_vector * cache.hidden.col(t).transpose();
    grads.attention_bias += d_logit * params.context_vector;
    grads.context_vector += d_logit * cache.attn_proj.col(t);
    d_hidden.col(t) += d_logit * params.attention_weights.transpose() * params.context_vector;
  }

  // backprop through time
  VectorX<Scalar> dh_next = VectorX<Scalar>::Zero(h);
  VectorX<Scalar> dc_next = VectorX<Scalar>::Zero(h);
  for (Index t = n - 1; t >= 0; --t) {
    if (pad_mask[static_cast<std::size_t>(t)]) {
      dh_next += d_hidden.col(t);  // state passed through unchanged
      continue;
    }
    using ArrayS = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    const VectorX<Scalar> dh = d_hidden.col(t) + dh_next;
    const ArrayS gate_i = cache.gates.col(t).segment(0, h).array();
    const ArrayS gate_f = cache.gates.col(t).segment(h, h).array();
    const ArrayS gate_g = cache.gates.col(t).segment(2 * h, h).array();
    const ArrayS gate_o = cache.gates.col(t).segment(3 * h, h).array();
    const ArrayS c_tanh = cache.cell_tanh.col(t).array();

    const VectorX<Scalar> c_prev =
        t > 0 ? VectorX<Scalar>(cache.cell.col(t - 1)) : VectorX<Scalar>(VectorX<Scalar>::Zero(h));
    const VectorX<Scalar> h_prev =
        t > 0 ? VectorX<Scalar>(cache.hidden.col(t - 1)) : VectorX<Scalar>(VectorX<Scalar>::Zero(h));

    VectorX<Scalar> dc = (dh.array() * gate_o * (Scalar(1) - c_tanh.square())).matrix() + dc_next;

    VectorX<Scalar> d_pre(4 * h);
    d_pre.segment(0, h) = (dc.array() * gate_g * gate_i * (Scalar(1) - gate_i)).matrix();
    d_pre.segment(h, h) = (dc.array() * c_prev.array() * gate_f * (Scalar(1) - gate_f)).matrix();
    d_pre.segment(2 * h, h) = (dc.array() * gate_i * (Scalar(1) - gate_g.square())).matrix();
    d_pre.segment(3 * h, h) = (dh.array() * c_tanh * gate_o * (Scalar(1) - gate_o)).matrix();

    grads.input_weights += d_pre * cache.inputs.col(t).transpose();
    grads.recurrent_weights += d_pre * h_prev.transpose();
    grads.gate_bias += d_pre;

    VectorX<Scalar> dx = params.input_weights.transpose() * d_pre;
    if (dropout_mask != nullptr) dx.array() *= dropout_mask->col(t).array();
    embedding_grads.row(ids[static_cast<std::size_t>(t)]) += dx.transpose();

    dh_next = params.recurrent_weights.transpose() * d_pre;
    dc_next = (dc.array() * gate_f).matrix();
  }
}

}  // namespace transearch
