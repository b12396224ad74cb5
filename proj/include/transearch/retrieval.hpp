// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact brute-force cosine ranking over an immutable embedding store, plus
// the evaluation metrics SuccessRate@k and MRR with a top-10 cutoff.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "transearch/errors.hpp"
#include "transearch/types.hpp"

namespace transearch {

/// Immutable store of snippet embeddings. Rows are pre-normalized so one
/// query costs one dot product per candidate.
struct SearchIndex {
  std::vector<std::string> ids;
  MatrixF vectors;  // count x dim, unit rows
  std::uint64_t vocab_checksum = 0;
  std::uint64_t ruleset_checksum = 0;
};

struct RankedResult {
  std::string snippet_id;
  float score = 0.0f;  // cosine, in [-1, 1]
  int rank = 0;        // 1-based
};

template <typename Scalar>
Scalar cosine(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) throw ZeroVector();
  return a.dot(b) / (na * nb);
}

/// Builds the index from raw (unnormalized) embeddings, one row per id.
/// Rejects duplicate ids and non-finite or zero vectors.
SearchIndex build_index(std::vector<std::string> ids, const MatrixF& embeddings);

/// Top-min(k, size) by cosine, ties broken by ascending snippet id.
std::vector<RankedResult> search(const SearchIndex& index, const VectorF& query, int k);

/// Rank of the correct result, 1-based; kNotFound marks a miss beyond the
/// evaluation cutoff.
constexpr int kNotFound = 0;

/// Fraction of queries whose FRank is within the top k.
double success_rate_at_k(const std::vector<int>& franks, int k);

/// Mean reciprocal rank; reciprocals beyond the cutoff (or kNotFound) count
/// as zero.
double mrr(const std::vector<int>& franks, int cutoff = 10);

struct EvalOutcome {
  std::vector<int> franks;  // per query, kNotFound when beyond the cutoff
  double sr1 = 0.0;
  double sr5 = 0.0;
  double sr10 = 0.0;
  double mrr = 0.0;
  /// Tab-separated report: header line + value line.
  std::string report() const;
};

/// Each comment queries the pool of all translations; FRank is the rank of
/// its own translation under the deterministic tie rule (ascending pair
/// position). Throws TooFewPairs below 2 and ZeroVector on a zero embedding.
EvalOutcome evaluate_distractor_protocol(
    const std::vector<std::pair<VectorF, VectorF>>& comment_translation_pairs, int cutoff = 10);

/// Versioned binary file: magic, dim, count, artifact checksums, then ids
/// and little-endian 32-bit float vectors.
void save_index(const SearchIndex& index, const std::string& path);
SearchIndex load_index(const std::string& path);

}  // namespace transearch
