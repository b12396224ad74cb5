// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Joint training of the two sequence encoders with a cosine margin ranking
// loss over <translation, positive comment, negative comment> triplets.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "transearch/encoder.hpp"
#include "transearch/errors.hpp"
#include "transearch/rng.hpp"
#include "transearch/text.hpp"
#include "transearch/types.hpp"

namespace transearch {

struct TrainConfig {
  int batch_size = 32;
  int vocab_size = 15000;
  int embed_dim = 512;
  int hidden_dim = 512;
  float margin = 0.6f;
  float learning_rate = 3e-4f;
  float dropout = 0.1f;
  int epochs = 200;
  std::uint64_t seed = 0;

  float weight_decay = 0.01f;
  float clip_norm = 5.0f;           // global gradient-norm clip
  int max_sequence_length = 512;    // longer inputs keep the head
  float validation_fraction = 0.05f;
};

struct TrainingPair {
  std::string snippet_id;
  std::vector<int> translation_ids;
  std::vector<int> comment_ids;
};

/// Indices into the pair list; `negative` is the pair whose comment serves
/// as the incorrect one.
struct Triplet {
  int anchor = 0;
  int negative = 0;
};

/// One triplet per pair, the negative drawn uniformly from all other pairs'
/// comments (redrawn on self-collision). Deterministic in the seed.
inline std::vector<Triplet> sample_negatives(std::size_t pair_count, std::uint64_t seed) {
  if (pair_count < 2) throw TooFewPairs(pair_count);
  Rng rng(seed);
  std::vector<Triplet> triplets;
  triplets.reserve(pair_count);
  for (std::size_t i = 0; i < pair_count; ++i) {
    int j = rng.uniform_int(static_cast<int>(pair_count));
    while (j == static_cast<int>(i)) j = rng.uniform_int(static_cast<int>(pair_count));
    triplets.push_back({static_cast<int>(i), j});
  }
  return triplets;
}

// Both encoders plus the word embeddings. With the shared mapping (the
// normal configuration) `embeddings` serves both sides; the two-vocabulary
// ablation engages `comment_embeddings` for the comment encoder instead.
template <typename Scalar>
struct SiameseModel {
  MatrixX<Scalar> embeddings;
  MatrixX<Scalar> comment_embeddings;  // 0x0 unless the ablation is active
  EncoderParams<Scalar> translation_encoder;
  EncoderParams<Scalar> comment_encoder;

  bool separate_embeddings() const { return comment_embeddings.size() > 0; }
  const MatrixX<Scalar>& embeddings_for_comments() const {
    return separate_embeddings() ? comment_embeddings : embeddings;
  }
};

/// Applies `fn` to every tensor of the model in a fixed order. All aggregate
/// operations (gradient clipping, optimizer steps, serialization) use this
/// single traversal so they stay mutually consistent.
template <typename Scalar, typename Fn>
void visit_tensors(SiameseModel<Scalar>& model, Fn&& fn) {
  fn(model.embeddings);
  if (model.separate_embeddings()) fn(model.comment_embeddings);
  for (EncoderParams<Scalar>* enc : {&model.translation_encoder, &model.comment_encoder}) {
    fn(enc->input_weights);
    fn(enc->recurrent_weights);
    fn(enc->gate_bias);
    fn(enc->attention_weights);
    fn(enc->attention_bias);
    fn(enc->context_vector);
  }
}

template <typename Scalar, typename Fn>
void visit_tensor_pairs(SiameseModel<Scalar>& a, SiameseModel<Scalar>& b, Fn&& fn) {
  fn(a.embeddings, b.embeddings);
  if (a.separate_embeddings()) fn(a.comment_embeddings, b.comment_embeddings);
  auto encoders = [&fn](EncoderParams<Scalar>& x, EncoderParams<Scalar>& y) {
    fn(x.input_weights, y.input_weights);
    fn(x.recurrent_weights, y.recurrent_weights);
    fn(x.gate_bias, y.gate_bias);
    fn(x.attention_weights, y.attention_weights);
    fn(x.attention_bias, y.attention_bias);
    fn(x.context_vector, y.context_vector);
  };
  encoders(a.translation_encoder, b.translation_encoder);
  encoders(a.comment_encoder, b.comment_encoder);
}

template <typename Scalar, typename Fn>
void visit_tensor_quads(SiameseModel<Scalar>& a, SiameseModel<Scalar>& b, SiameseModel<Scalar>& c,
                        SiameseModel<Scalar>& d, Fn&& fn) {
  fn(a.embeddings, b.embeddings, c.embeddings, d.embeddings);
  if (a.separate_embeddings())
    fn(a.comment_embeddings, b.comment_embeddings, c.comment_embeddings, d.comment_embeddings);
  auto encoders = [&fn](EncoderParams<Scalar>& w, EncoderParams<Scalar>& x,
                        EncoderParams<Scalar>& y, EncoderParams<Scalar>& z) {
    fn(w.input_weights, x.input_weights, y.input_weights, z.input_weights);
    fn(w.recurrent_weights, x.recurrent_weights, y.recurrent_weights, z.recurrent_weights);
    fn(w.gate_bias, x.gate_bias, y.gate_bias, z.gate_bias);
    fn(w.attention_weights, x.attention_weights, y.attention_weights, z.attention_weights);
    fn(w.attention_bias, x.attention_bias, y.attention_bias, z.attention_bias);
    fn(w.context_vector, x.context_vector, y.context_vector, z.context_vector);
  };
  encoders(a.translation_encoder, b.translation_encoder, c.translation_encoder,
           d.translation_encoder);
  encoders(a.comment_encoder, b.comment_encoder, c.comment_encoder, d.comment_encoder);
}

template <typename Scalar>
SiameseModel<Scalar> zeros_like(const SiameseModel<Scalar>& model) {
  SiameseModel<Scalar> z;
  z.embeddings = MatrixX<Scalar>::Zero(model.embeddings.rows(), model.embeddings.cols());
  if (model.separate_embeddings())
    z.comment_embeddings =
        MatrixX<Scalar>::Zero(model.comment_embeddings.rows(), model.comment_embeddings.cols());
  auto zero_encoder = [](const EncoderParams<Scalar>& p) {
    return EncoderParams<Scalar>::zeros(p.input_size(), p.hidden_size());
  };
  z.translation_encoder = zero_encoder(model.translation_encoder);
  z.comment_encoder = zero_encoder(model.comment_encoder);
  return z;
}

template <typename Scalar>
struct AdamState {
  SiameseModel<Scalar> first_moment;
  SiameseModel<Scalar> second_moment;
  long long step = 0;

  static AdamState zeros_like(const SiameseModel<Scalar>& model) {
    AdamState s;
    s.first_moment = transearch::zeros_like(model);
    s.second_moment = transearch::zeros_like(model);
    return s;
  }
};

template <typename Scalar>
Scalar cosine_similarity(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) throw ZeroVector();
  return a.dot(b) / (na * nb);
}

/// max(0, margin - cos(t, c+) + cos(t, c-)).
template <typename Scalar>
Scalar ranking_loss(const VectorX<Scalar>& translation, const VectorX<Scalar>& positive,
                    const VectorX<Scalar>& negative, Scalar margin) {
  const Scalar pos = cosine_similarity(translation, positive);
  const Scalar neg = cosine_similarity(translation, negative);
  return std::max(Scalar(0), margin - pos + neg);
}

namespace detail {

// d cos(a,b)/da = b/(|a||b|) - cos * a/|a|^2
template <typename Scalar>
void cosine_backward(const VectorX<Scalar>& a, const VectorX<Scalar>& b, Scalar upstream,
                     VectorX<Scalar>& da, VectorX<Scalar>& db) {
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  const Scalar cos = a.dot(b) / (na * nb);
  da += upstream * (b / (na * nb) - cos * a / (na * na));
  db += upstream * (a / (na * nb) - cos * b / (nb * nb));
}

}  // namespace detail

/// Decoupled weight-decay adaptive-moment update with the standard moment
/// decays 0.9/0.999 and epsilon 1e-8, bias-corrected. The caller is
/// responsible for zeroing the <pad> embedding-row gradient; the row itself
/// then never moves because it starts at zero and weight decay of zero is
/// zero. Throws ShapeMismatch when gradient shapes disagree with parameters.
template <typename Scalar>
void adamw_step(SiameseModel<Scalar>& params, SiameseModel<Scalar>& grads,
                AdamState<Scalar>& moments, const TrainConfig& config) {
  visit_tensor_pairs(params, grads, [](auto& p, auto& g) {
    if (p.rows() != g.rows() || p.cols() != g.cols())
      throw ShapeMismatch("gradient tensor does not match parameter tensor");
  });
  ++moments.step;
  const Scalar beta1 = Scalar(0.9), beta2 = Scalar(0.999), eps = Scalar(1e-8);
  const Scalar bias1 = Scalar(1) - std::pow(beta1, Scalar(moments.step));
  const Scalar bias2 = Scalar(1) - std::pow(beta2, Scalar(moments.step));
  const Scalar lr = static_cast<Scalar>(config.learning_rate);
  const Scalar wd = static_cast<Scalar>(config.weight_decay);
  visit_tensor_quads(params, grads, moments.first_moment, moments.second_moment,
                     [&](auto& p, auto& g, auto& m, auto& v) {
                       m = beta1 * m + (Scalar(1) - beta1) * g;
                       v = (beta2 * v.array() + (Scalar(1) - beta2) * g.array().square()).matrix();
                       p.array() -= lr * ((m.array() / bias1) /
                                          ((v.array() / bias2).sqrt() + eps) +
                                          wd * p.array());
                     });
}

inline std::vector<int> truncate_head(std::vector<int> ids, int max_len) {
  if (static_cast<int>(ids.size()) > max_len) ids.resize(static_cast<std::size_t>(max_len));
  return ids;
}

/// Eval-mode embedding of a single sequence (no dropout, no padding).
template <typename Scalar>
VectorX<Scalar> embed_sequence(const EncoderParams<Scalar>& encoder,
                               const MatrixX<Scalar>& embeddings, const std::vector<int>& ids,
                               int max_len) {
  const std::vector<int> cut = truncate_head(ids, max_len);
  const std::vector<std::uint8_t> mask(cut.size(), 0);
  return encode<Scalar>(encoder, embeddings, cut, mask).embedding;
}

namespace detail {

// One padded view of a sequence within a batch.
struct PaddedIds {
  std::vector<int> ids;
  std::vector<std::uint8_t> pad;
};

inline PaddedIds pad_to(const std::vector<int>& ids, std::size_t width, int pad_id) {
  PaddedIds p;
  p.ids = ids;
  p.pad.assign(ids.size(), 0);
  while (p.ids.size() < width) {
    p.ids.push_back(pad_id);
    p.pad.push_back(1);
  }
  return p;
}

}  // namespace detail

/// Forward + backward over one mini-batch of triplets; grads receive the
/// gradient of the batch-mean loss. Returns the summed loss. Dropout masks
/// are drawn from `dropout_rng` in triplet order (translation, positive,
/// negative) when training.
template <typename Scalar>
Scalar train_batch_gradients(const SiameseModel<Scalar>& model,
                             const std::vector<TrainingPair>& pairs,
                             const std::vector<Triplet>& batch, const TrainConfig& config,
                             SiameseModel<Scalar>& grads, Rng* dropout_rng) {
  const int max_len = config.max_sequence_length;
  std::size_t translation_width = 0;
  std::size_t comment_width = 0;
  for (const Triplet& triplet : batch) {
    translation_width = std::max(
        translation_width,
        truncate_head(pairs[static_cast<std::size_t>(triplet.anchor)].translation_ids, max_len)
            .size());
    for (int side : {triplet.anchor, triplet.negative})
      comment_width = std::max(
          comment_width,
          truncate_head(pairs[static_cast<std::size_t>(side)].comment_ids, max_len).size());
  }

  const Scalar inv_batch = Scalar(1) / Scalar(batch.size());
  const Scalar margin = static_cast<Scalar>(config.margin);
  const MatrixX<Scalar>& comment_embeddings = model.embeddings_for_comments();
  MatrixX<Scalar>& comment_embedding_grads =
      model.separate_embeddings() ? grads.comment_embeddings : grads.embeddings;

  // accumulate encoder grads in place; moved back out after the loop
  EncoderGrads<Scalar> t_grads{std::move(grads.translation_encoder.input_weights),
                               std::move(grads.translation_encoder.recurrent_weights),
                               std::move(grads.translation_encoder.gate_bias),
                               std::move(grads.translation_encoder.attention_weights),
                               std::move(grads.translation_encoder.attention_bias),
                               std::move(grads.translation_encoder.context_vector)};
  EncoderGrads<Scalar> c_grads{std::move(grads.comment_encoder.input_weights),
                               std::move(grads.comment_encoder.recurrent_weights),
                               std::move(grads.comment_encoder.gate_bias),
                               std::move(grads.comment_encoder.attention_weights),
                               std::move(grads.comment_encoder.attention_bias),
                               std::move(grads.comment_encoder.context_vector)};

  Scalar loss_sum = Scalar(0);
  for (const Triplet& triplet : batch) {
    const TrainingPair& anchor = pairs[static_cast<std::size_t>(triplet.anchor)];
    const TrainingPair& other = pairs[static_cast<std::size_t>(triplet.negative)];
    const auto t_seq =
        detail::pad_to(truncate_head(anchor.translation_ids, max_len), translation_width, 0);
    const auto cp_seq =
        detail::pad_to(truncate_head(anchor.comment_ids, max_len), comment_width, 0);
    const auto cn_seq =
        detail::pad_to(truncate_head(other.comment_ids, max_len), comment_width, 0);

    MatrixX<Scalar> mask_t, mask_cp, mask_cn;
    const MatrixX<Scalar>*ptr_t = nullptr, *ptr_cp = nullptr, *ptr_cn = nullptr;
    if (dropout_rng != nullptr && config.dropout > 0.0f) {
      const Index m = model.translation_encoder.input_size();
      mask_t = make_dropout_mask<Scalar>(m, static_cast<Index>(t_seq.ids.size()),
                                         config.dropout, *dropout_rng);
      mask_cp = make_dropout_mask<Scalar>(m, static_cast<Index>(cp_seq.ids.size()),
                                          config.dropout, *dropout_rng);
      mask_cn = make_dropout_mask<Scalar>(m, static_cast<Index>(cn_seq.ids.size()),
                                          config.dropout, *dropout_rng);
      ptr_t = &mask_t;
      ptr_cp = &mask_cp;
      ptr_cn = &mask_cn;
    }

    const auto fwd_t = encode<Scalar>(model.translation_encoder, model.embeddings, t_seq.ids,
                                      t_seq.pad, ptr_t);
    const auto fwd_cp = encode<Scalar>(model.comment_encoder, comment_embeddings, cp_seq.ids,
                                       cp_seq.pad, ptr_cp);
    const auto fwd_cn = encode<Scalar>(model.comment_encoder, comment_embeddings, cn_seq.ids,
                                       cn_seq.pad, ptr_cn);

    const Scalar pos = cosine_similarity(fwd_t.embedding, fwd_cp.embedding);
    const Scalar neg = cosine_similarity(fwd_t.embedding, fwd_cn.embedding);
    if (!std::isfinite(static_cast<double>(pos)) || !std::isfinite(static_cast<double>(neg)))
      return std::numeric_limits<Scalar>::quiet_NaN();  // hinge max would mask it
    const Scalar loss = std::max(Scalar(0), margin - pos + neg);
    loss_sum += loss;
    if (loss <= Scalar(0)) continue;

    VectorX<Scalar> d_t = VectorX<Scalar>::Zero(fwd_t.embedding.size());
    VectorX<Scalar> d_cp = VectorX<Scalar>::Zero(d_t.size());
    VectorX<Scalar> d_cn = VectorX<Scalar>::Zero(d_t.size());
    detail::cosine_backward<Scalar>(fwd_t.embedding, fwd_cp.embedding, -inv_batch, d_t, d_cp);
    detail::cosine_backward<Scalar>(fwd_t.embedding, fwd_cn.embedding, inv_batch, d_t, d_cn);

    encode_backward<Scalar>(model.translation_encoder, t_seq.ids, t_seq.pad, fwd_t, d_t, t_grads,
                            grads.embeddings, ptr_t);
    encode_backward<Scalar>(model.comment_encoder, cp_seq.ids, cp_seq.pad, fwd_cp, d_cp, c_grads,
                            comment_embedding_grads, ptr_cp);
    encode_backward<Scalar>(model.comment_encoder, cn_seq.ids, cn_seq.pad, fwd_cn, d_cn, c_grads,
                            comment_embedding_grads, ptr_cn);
  }

  grads.translation_encoder.input_weights = std::move(t_grads.input_weights);
  grads.translation_encoder.recurrent_weights = std::move(t_grads.recurrent_weights);
  grads.translation_encoder.gate_bias = std::move(t_grads.gate_bias);
  grads.translation_encoder.attention_weights = std::move(t_grads.attention_weights);
  grads.translation_encoder.attention_bias = std::move(t_grads.attention_bias);
  grads.translation_encoder.context_vector = std::move(t_grads.context_vector);
  grads.comment_encoder.input_weights = std::move(c_grads.input_weights);
  grads.comment_encoder.recurrent_weights = std::move(c_grads.recurrent_weights);
  grads.comment_encoder.gate_bias = std::move(c_grads.gate_bias);
  grads.comment_encoder.attention_weights = std::move(c_grads.attention_weights);
  grads.comment_encoder.attention_bias = std::move(c_grads.attention_bias);
  grads.comment_encoder.context_vector = std::move(c_grads.context_vector);
  return loss_sum;
}

/// Scales all gradients so their global norm does not exceed `clip_norm`.
template <typename Scalar>
void clip_gradients(SiameseModel<Scalar>& grads, Scalar clip_norm) {
  if (clip_norm <= Scalar(0)) return;
  Scalar squared = Scalar(0);
  visit_tensors(grads, [&](auto& g) { squared += g.squaredNorm(); });
  const Scalar norm = std::sqrt(squared);
  if (norm > clip_norm) {
    const Scalar scale = clip_norm / norm;
    visit_tensors(grads, [&](auto& g) { g *= scale; });
  }
}

/// One pass over the pairs: seeded shuffle, corpus-wide negative sampling,
/// mini-batches of config.batch_size (last partial batch kept), one
/// optimizer step per batch. Returns the epoch-mean triplet loss.
/// Throws NonFiniteLoss with the failing epoch/batch.
template <typename Scalar>
Scalar train_epoch(SiameseModel<Scalar>& model, AdamState<Scalar>& moments,
                   const std::vector<TrainingPair>& pairs, const TrainConfig& config,
                   int epoch_index) {
  const std::size_t n = pairs.size();
  const std::vector<Triplet> triplets =
      sample_negatives(n, derive_seed(config.seed, 0x7E0000ULL + static_cast<std::uint64_t>(epoch_index)));

  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  Rng shuffle_rng(derive_seed(config.seed, 0x500000ULL + static_cast<std::uint64_t>(epoch_index)));
  for (std::size_t i = n - 1; i > 0; --i) {
    const int j = shuffle_rng.uniform_int(static_cast<int>(i + 1));
    std::swap(order[i], order[static_cast<std::size_t>(j)]);
  }

  Rng dropout_rng(derive_seed(config.seed, 0xD00000ULL + static_cast<std::uint64_t>(epoch_index)));
  Rng* dropout = config.dropout > 0.0f ? &dropout_rng : nullptr;

  Scalar loss_total = Scalar(0);
  int batch_index = 0;
  for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(config.batch_size)) {
    const std::size_t end = std::min(n, begin + static_cast<std::size_t>(config.batch_size));
    std::vector<Triplet> batch;
    batch.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k)
      batch.push_back(triplets[static_cast<std::size_t>(order[k])]);

    SiameseModel<Scalar> grads = zeros_like(model);
    const Scalar batch_loss = train_batch_gradients(model, pairs, batch, config, grads, dropout);
    if (!std::isfinite(static_cast<double>(batch_loss)))
      throw NonFiniteLoss(epoch_index, batch_index);

    grads.embeddings.row(0).setZero();  // <pad> row is not trainable
    if (grads.separate_embeddings()) grads.comment_embeddings.row(0).setZero();
    clip_gradients(grads, static_cast<Scalar>(config.clip_norm));
    adamw_step(model, grads, moments, config);
    loss_total += batch_loss;
    ++batch_index;
  }
  return loss_total / Scalar(n);
}

/// Mean triplet loss without gradients or dropout (validation).
template <typename Scalar>
Scalar mean_loss(const SiameseModel<Scalar>& model, const std::vector<TrainingPair>& pairs,
                 const std::vector<Triplet>& triplets, const TrainConfig& config) {
  const int max_len = config.max_sequence_length;
  const Scalar margin = static_cast<Scalar>(config.margin);
  Scalar total = Scalar(0);
  for (const Triplet& triplet : triplets) {
    const auto& anchor = pairs[static_cast<std::size_t>(triplet.anchor)];
    const auto& other = pairs[static_cast<std::size_t>(triplet.negative)];
    const VectorX<Scalar> et =
        embed_sequence(model.translation_encoder, model.embeddings, anchor.translation_ids, max_len);
    const VectorX<Scalar> ecp = embed_sequence(model.comment_encoder,
                                               model.embeddings_for_comments(),
                                               anchor.comment_ids, max_len);
    const VectorX<Scalar> ecn = embed_sequence(model.comment_encoder,
                                               model.embeddings_for_comments(),
                                               other.comment_ids, max_len);
    total += ranking_loss(et, ecp, ecn, margin);
  }
  return triplets.empty() ? Scalar(0) : total / Scalar(triplets.size());
}

template <typename Scalar>
struct TrainResult {
  SiameseModel<Scalar> model;        // lowest validation loss (final when no split)
  AdamState<Scalar> moments;         // optimizer state at that point
  int selected_epoch = 0;
  std::vector<std::pair<Scalar, Scalar>> losses;  // per epoch: (train, validation)
};

/// Full training run: a deterministic 5% validation carve, config.epochs
/// passes, model selection on the lowest validation loss. `log` (optional)
/// receives one tab-separated line per epoch: epoch, train loss, val loss.
inline void validate_config(const TrainConfig& config) {
  if (config.margin <= 0.0f || config.learning_rate <= 0.0f || config.batch_size < 1 ||
      config.embed_dim < 1 || config.hidden_dim < 1 || config.epochs < 1 ||
      config.dropout < 0.0f || config.dropout >= 1.0f)
    throw std::invalid_argument("training configuration values must be positive");
}

template <typename Scalar>
TrainResult<Scalar> train_model(SiameseModel<Scalar> model, const std::vector<TrainingPair>& pairs,
                                const TrainConfig& config, std::ostream* log = nullptr) {
  validate_config(config);
  if (pairs.size() < 2) throw TooFewPairs(pairs.size());

  std::vector<int> indices(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) indices[i] = static_cast<int>(i);
  Rng split_rng(derive_seed(config.seed, 0xA115917ULL));
  for (std::size_t i = indices.size() - 1; i > 0; --i) {
    const int j = split_rng.uniform_int(static_cast<int>(i + 1));
    std::swap(indices[i], indices[static_cast<std::size_t>(j)]);
  }
  std::size_t val_count = static_cast<std::size_t>(
      static_cast<double>(pairs.size()) * static_cast<double>(config.validation_fraction));
  if (pairs.size() - val_count < 2) val_count = 0;  // too small to carve

  std::vector<TrainingPair> train_pairs, val_pairs;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& pair = pairs[static_cast<std::size_t>(indices[i])];
    if (i < val_count)
      val_pairs.push_back(pair);
    else
      train_pairs.push_back(pair);
  }

  AdamState<Scalar> moments = AdamState<Scalar>::zeros_like(model);
  TrainResult<Scalar> result;
  bool have_best = false;
  Scalar best_val = Scalar(0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Scalar train_loss = train_epoch(model, moments, train_pairs, config, epoch);
    Scalar val_loss = Scalar(0);
    if (val_pairs.size() >= 2) {
      // fixed across epochs so validation losses are comparable
      const auto val_triplets =
          sample_negatives(val_pairs.size(), derive_seed(config.seed, 0xBA11ADULL));
      val_loss = mean_loss(model, val_pairs, val_triplets, config);
      if (!have_best || val_loss < best_val) {
        have_best = true;
        best_val = val_loss;
        result.model = model;
        result.moments = moments;
        result.selected_epoch = epoch;
      }
    }
    result.losses.emplace_back(train_loss, val_loss);
    if (log != nullptr)
      (*log) << epoch << '\t' << static_cast<double>(train_loss) << '\t'
             << static_cast<double>(val_loss) << '\n';
  }
  if (!have_best) {
    result.model = std::move(model);
    result.moments = std::move(moments);
    result.selected_epoch = config.epochs - 1;
  }
  return result;
}

}  // namespace transearch
