// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "transearch/detail/binary_io.hpp"

namespace transearch {

SearchIndex build_index(std::vector<std::string> ids, const MatrixF& embeddings) {
  if (static_cast<Index>(ids.size()) != embeddings.rows())
    throw ShapeMismatch("one id per embedding row required");
  std::set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw std::invalid_argument("duplicate snippet id: " + id);

  SearchIndex index;
  index.ids = std::move(ids);
  index.vectors = embeddings;
  for (Index r = 0; r < index.vectors.rows(); ++r) {
    if (!index.vectors.row(r).allFinite())
      throw std::invalid_argument("non-finite embedding for id " + index.ids[static_cast<std::size_t>(r)]);
    const float norm = index.vectors.row(r).norm();
    if (norm == 0.0f) throw ZeroVector();
    index.vectors.row(r) /= norm;
  }
  return index;
}

std::vector<RankedResult> search(const SearchIndex& index, const VectorF& query, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (index.ids.empty()) throw std::invalid_argument("search over an empty index");
  const float norm = query.norm();
  if (norm == 0.0f) throw ZeroVector();
  const VectorF unit = query / norm;
  const VectorF scores = index.vectors * unit;

  std::vector<int> order(index.ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores(a) != scores(b)) return scores(a) > scores(b);
    return index.ids[static_cast<std::size_t>(a)] < index.ids[static_cast<std::size_t>(b)];
  });

  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::vector<RankedResult> results;
  results.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    const int row = order[r];
    results.push_back({index.ids[static_cast<std::size_t>(row)], scores(row),
                       static_cast<int>(r) + 1});
  }
  return results;
}

double success_rate_at_k(const std::vector<int>& franks, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (franks.empty()) throw EmptyQuerySet();
  std::size_t hits = 0;
  for (int frank : franks)
    if (frank != kNotFound && frank <= k) ++hits;
  return static_cast<double>(hits) / static_cast<double>(franks.size());
}

double mrr(const std::vector<int>& franks, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  if (franks.empty()) throw EmptyQuerySet();
  double sum = 0.0;
  for (int frank : franks)
    if (frank != kNotFound && frank <= cutoff) sum += 1.0 / static_cast<double>(frank);
  return sum / static_cast<double>(franks.size());
}

EvalOutcome evaluate_distractor_protocol(
    const std::vector<std::pair<VectorF, VectorF>>& comment_translation_pairs, int cutoff) {
  const std::size_t n = comment_translation_pairs.size();
  if (n < 2) throw TooFewPairs(n);

  const Index dim = comment_translation_pairs.front().first.size();
  MatrixF translations(static_cast<Index>(n), dim);
  MatrixF comments(static_cast<Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [comment, translation] = comment_translation_pairs[i];
    if (comment.size() != dim || translation.size() != dim)
      throw ShapeMismatch("embedding dimensions disagree across pairs");
    const float cn = comment.norm();
    const float tn = translation.norm();
    if (cn == 0.0f || tn == 0.0f) throw ZeroVector();
    comments.row(static_cast<Index>(i)) = comment.transpose() / cn;
    translations.row(static_cast<Index>(i)) = translation.transpose() / tn;
  }

  EvalOutcome outcome;
  outcome.franks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const VectorF scores = translations * comments.row(static_cast<Index>(i)).transpose();
    const float own = scores(static_cast<Index>(i));
    int rank = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const float other = scores(static_cast<Index>(j));
      if (other > own || (other == own && j < i)) ++rank;
    }
    outcome.franks.push_back(rank <= cutoff ? rank : kNotFound);
  }
  outcome.sr1 = success_rate_at_k(outcome.franks, 1);
  outcome.sr5 = success_rate_at_k(outcome.franks, 5);
  outcome.sr10 = success_rate_at_k(outcome.franks, 10);
  outcome.mrr = transearch::mrr(outcome.franks, cutoff);
  return outcome;
}

std::string EvalOutcome::report() const {
  std::ostringstream out;
  out << "SR@1\tSR@5\tSR@10\tMRR\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  out << sr1 << '\t' << sr5 << '\t' << sr10 << '\t' << mrr << '\n';
  return out.str();
}

namespace {
constexpr const char kIndexMagic[] = "TSIDX001";  // 8 bytes
}

void save_index(const SearchIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileUnreadable(path);
  out.write(kIndexMagic, 8);
  detail::write_u32(out, static_cast<std::uint32_t>(index.vectors.cols()));
  detail::write_u32(out, static_cast<std::uint32_t>(index.ids.size()));
  detail::write_u64(out, index.vocab_checksum);
  detail::write_u64(out, index.ruleset_checksum);
  for (const auto& id : index.ids) detail::write_string(out, id);
  for (Index r = 0; r < index.vectors.rows(); ++r)
    for (Index c = 0; c < index.vectors.cols(); ++c) detail::write_f32(out, index.vectors(r, c));
  if (!out) throw FileUnreadable(path);
}

SearchIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  char magic[8];
  if (!in.read(magic, 8)) throw CorruptFile(path);
  if (std::memcmp(magic, kIndexMagic, 8) != 0) throw CorruptFile(path);
  SearchIndex index;
  const std::uint32_t dim = detail::read_u32(in, path);
  const std::uint32_t count = detail::read_u32(in, path);
  index.vocab_checksum = detail::read_u64(in, path);
  index.ruleset_checksum = detail::read_u64(in, path);
  index.ids.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) index.ids.push_back(detail::read_string(in, path));
  index.vectors.resize(count, dim);
  for (Index r = 0; r < index.vectors.rows(); ++r)
    for (Index c = 0; c < index.vectors.cols(); ++c)
      index.vectors(r, c) = detail::read_f32(in, path);
  return index;
}

}  // namespace transearch
