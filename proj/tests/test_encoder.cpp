// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/encoder.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "transearch/errors.hpp"

using namespace transearch;

namespace {

using Vec = VectorX<double>;
using Mat = MatrixX<double>;

struct Instance {
  EncoderParams<double> params;
  Mat embeddings;
  std::vector<int> ids;
  std::vector<std::uint8_t> pad;
};

Instance random_instance(std::uint64_t seed, int vocab, int m, int h, int len, int pads = 0) {
  Instance inst;
  Rng rng(seed);
  inst.params = init_encoder<double>(m, h, rng);
  inst.embeddings = Mat::Zero(vocab, m);
  for (int r = 1; r < vocab; ++r)
    for (int c = 0; c < m; ++c) inst.embeddings(r, c) = rng.uniform(-0.5, 0.5);
  for (int i = 0; i < len; ++i) {
    inst.ids.push_back(1 + rng.uniform_int(vocab - 1));
    inst.pad.push_back(0);
  }
  for (int i = 0; i < pads; ++i) {
    inst.ids.push_back(0);
    inst.pad.push_back(1);
  }
  return inst;
}

double objective(const Instance& inst, const Vec& upstream) {
  return upstream.dot(encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad).embedding);
}

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

// central finite differences over a single tensor
template <typename Tensor, typename Eval>
double max_tensor_error(Tensor& tensor, const Tensor& analytic, Eval eval, double step) {
  double worst = 0.0;
  for (Index r = 0; r < tensor.rows(); ++r) {
    for (Index c = 0; c < tensor.cols(); ++c) {
      const double saved = tensor(r, c);
      tensor(r, c) = saved + step;
      const double up = eval();
      tensor(r, c) = saved - step;
      const double down = eval();
      tensor(r, c) = saved;
      worst = std::max(worst, relative_error(analytic(r, c), (up - down) / (2 * step)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("attention weights: single position gets exactly one") {
  auto inst = random_instance(11, 9, 6, 5, 1);
  const auto result = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  CHECK(result.attention.size() == 1);
  CHECK(result.attention(0) == 1.0);
}

TEST_CASE("attention weights: constant logits give a uniform distribution") {
  auto inst = random_instance(12, 9, 6, 5, 4);
  // zero projection makes every logit the same bias dot context
  inst.params.attention_weights.setZero();
  const auto result = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  for (int t = 0; t < 4; ++t) CHECK(result.attention(t) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("attention weights: nonnegative, sum to one, zero on padding") {
  auto inst = random_instance(13, 16, 8, 7, 6, 3);
  const auto result = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  double sum = 0.0;
  for (Index t = 0; t < result.attention.size(); ++t) {
    CHECK(result.attention(t) >= 0.0);
    sum += result.attention(t);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-5);
  CHECK(result.attention(6) == 0.0);
  CHECK(result.attention(7) == 0.0);
  CHECK(result.attention(8) == 0.0);
}

TEST_CASE("trailing padding never changes the embedding") {
  auto plain = random_instance(14, 12, 8, 8, 5, 0);
  auto padded = plain;
  for (int i = 0; i < 3; ++i) {
    padded.ids.push_back(0);
    padded.pad.push_back(1);
  }
  const auto a = encode<double>(plain.params, plain.embeddings, plain.ids, plain.pad);
  const auto b = encode<double>(padded.params, padded.embeddings, padded.ids, padded.pad);
  CHECK(a.embedding == b.embedding);
}

TEST_CASE("encode rejects empty or fully padded input") {
  auto inst = random_instance(15, 9, 4, 4, 2);
  CHECK_THROWS_AS(
      encode<double>(inst.params, inst.embeddings, std::vector<int>{}, std::vector<std::uint8_t>{}),
      EmptySequence);
  const std::vector<int> ids = {0, 0};
  const std::vector<std::uint8_t> pad = {1, 1};
  CHECK_THROWS_AS(encode<double>(inst.params, inst.embeddings, ids, pad), EmptySequence);
  const std::vector<std::uint8_t> bad_len = {0};
  CHECK_THROWS_AS(encode<double>(inst.params, inst.embeddings, ids, bad_len), ShapeMismatch);
}

TEST_CASE("recurrence is order-sensitive") {
  auto inst = random_instance(16, 12, 8, 8, 6);
  auto reversed = inst;
  std::reverse(reversed.ids.begin(), reversed.ids.end());
  const auto a = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  const auto b = encode<double>(reversed.params, reversed.embeddings, reversed.ids, reversed.pad);
  CHECK((a.embedding - b.embedding).norm() > 1e-8);
}

TEST_CASE("zero upstream gradient gives all-zero grads") {
  auto inst = random_instance(17, 10, 6, 6, 4);
  const auto cache = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  auto grads = EncoderGrads<double>::zeros_like(inst.params);
  Mat embedding_grads = Mat::Zero(inst.embeddings.rows(), inst.embeddings.cols());
  encode_backward<double>(inst.params, inst.ids, inst.pad, cache,
                          Vec::Zero(cache.embedding.size()), grads, embedding_grads);
  CHECK(grads.input_weights.isZero());
  CHECK(grads.recurrent_weights.isZero());
  CHECK(grads.gate_bias.isZero());
  CHECK(grads.attention_weights.isZero());
  CHECK(grads.attention_bias.isZero());
  CHECK(grads.context_vector.isZero());
  CHECK(embedding_grads.isZero());
}

TEST_CASE("backward rejects a cache from different inputs") {
  auto inst = random_instance(18, 10, 6, 6, 4);
  const auto cache = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  auto other = inst.ids;
  other[0] = other[0] == 1 ? 2 : 1;
  auto grads = EncoderGrads<double>::zeros_like(inst.params);
  Mat embedding_grads = Mat::Zero(inst.embeddings.rows(), inst.embeddings.cols());
  CHECK_THROWS_AS(encode_backward<double>(inst.params, other, inst.pad, cache,
                                          Vec::Ones(cache.embedding.size()), grads,
                                          embedding_grads),
                  CacheMismatch);
}

TEST_CASE("analytic gradients match central finite differences") {
  const double step = 1e-4;
  double worst = 0.0;
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    auto inst = random_instance(seed, 11, 8, 8, 5, 1);
    Rng up_rng(seed * 7 + 1);
    Vec upstream(8);
    for (int i = 0; i < 8; ++i) upstream(i) = up_rng.uniform(-1.0, 1.0);

    const auto cache = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
    auto grads = EncoderGrads<double>::zeros_like(inst.params);
    Mat embedding_grads = Mat::Zero(inst.embeddings.rows(), inst.embeddings.cols());
    encode_backward<double>(inst.params, inst.ids, inst.pad, cache, upstream, grads,
                            embedding_grads);

    auto eval = [&]() { return objective(inst, upstream); };
    worst = std::max(worst, max_tensor_error(inst.params.input_weights, grads.input_weights, eval, step));
    worst = std::max(worst,
                     max_tensor_error(inst.params.recurrent_weights, grads.recurrent_weights, eval, step));
    worst = std::max(worst, max_tensor_error(inst.params.gate_bias, grads.gate_bias, eval, step));
    worst = std::max(worst,
                     max_tensor_error(inst.params.attention_weights, grads.attention_weights, eval, step));
    worst = std::max(worst,
                     max_tensor_error(inst.params.attention_bias, grads.attention_bias, eval, step));
    worst = std::max(worst,
                     max_tensor_error(inst.params.context_vector, grads.context_vector, eval, step));
    worst = std::max(worst, max_tensor_error(inst.embeddings, embedding_grads, eval, step));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("padding positions contribute no embedding gradient") {
  auto inst = random_instance(19, 10, 6, 6, 4, 3);
  const auto cache = encode<double>(inst.params, inst.embeddings, inst.ids, inst.pad);
  auto grads = EncoderGrads<double>::zeros_like(inst.params);
  Mat embedding_grads = Mat::Zero(inst.embeddings.rows(), inst.embeddings.cols());
  Vec upstream = Vec::Ones(cache.embedding.size());
  encode_backward<double>(inst.params, inst.ids, inst.pad, cache, upstream, grads,
                          embedding_grads);
  CHECK(embedding_grads.row(0).isZero());  // pad id row
}

TEST_CASE("dropout") {
  Mat vecs = Mat::Ones(64, 64);
  SUBCASE("rate zero is the identity") {
    Mat copy = vecs;
    dropout_apply(copy, 0.0, 7, true);
    CHECK(copy == vecs);
  }
  SUBCASE("eval mode is the identity") {
    Mat copy = vecs;
    dropout_apply(copy, 0.1, 7, false);
    CHECK(copy == vecs);
  }
  SUBCASE("train mode: deterministic inverted mask") {
    Mat a = vecs, b = vecs;
    dropout_apply(a, 0.1, 7, true);
    dropout_apply(b, 0.1, 7, true);
    CHECK(a == b);
    int zeros = 0;
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c) {
        if (a(r, c) == 0.0) {
          ++zeros;
        } else {
          CHECK(a(r, c) == doctest::Approx(1.0 / 0.9));
        }
      }
    const double fraction = static_cast<double>(zeros) / static_cast<double>(a.size());
    CHECK(fraction > 0.05);
    CHECK(fraction < 0.16);
  }
}
