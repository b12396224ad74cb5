// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Tokenization and the single word-mapping shared by translations and
// comments: one vocabulary, one embedding matrix, so a word has the same
// vector wherever it occurs.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transearch/rng.hpp"
#include "transearch/translator.hpp"
#include "transearch/types.hpp"

namespace transearch {

using TokenSeq = std::vector<std::string>;

/// Splits on whitespace/punctuation and on camelCase / snake_case /
/// letter-digit boundaries, lowercases, drops empties.
/// "calArraySum" -> [cal, array, sum].
TokenSeq tokenize(std::string_view text);

/// Token stream of a whole translation; each sentence is terminated by the
/// boundary token ".".
TokenSeq translation_tokens(const Translation& translation);

struct Vocabulary {
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;
  static constexpr const char* kPadWord = "<pad>";
  static constexpr const char* kUnkWord = "<unk>";

  std::vector<std::string> words;            // index = id; [0]=<pad>, [1]=<unk>
  std::unordered_map<std::string, int> ids;  // reverse lookup

  int size() const { return static_cast<int>(words.size()); }
  int id_of(const std::string& word) const {
    auto it = ids.find(word);
    return it == ids.end() ? kUnkId : it->second;
  }
};

/// Top-(n-2) words by frequency over the union of both corpora, after the
/// two reserved entries. Ties break lexicographically; document order never
/// matters. Throws EmptyCorpus when there is not a single token.
Vocabulary build_shared_vocabulary(const std::vector<TokenSeq>& translations,
                                   const std::vector<TokenSeq>& comments, int n);

std::vector<int> map_tokens(const Vocabulary& vocab, const TokenSeq& tokens);

/// Uniform init in [-0.1, 0.1]; the <pad> row stays all-zero and is never
/// updated during training.
template <typename Scalar>
MatrixX<Scalar> init_embeddings(const Vocabulary& vocab, int embed_dim, std::uint64_t seed) {
  MatrixX<Scalar> embeddings = MatrixX<Scalar>::Zero(vocab.size(), embed_dim);
  Rng rng(seed);
  for (int row = 1; row < vocab.size(); ++row)
    for (int col = 0; col < embed_dim; ++col)
      embeddings(row, col) = static_cast<Scalar>(rng.uniform(-0.1, 0.1));
  return embeddings;
}

/// One word per line, line number = id. The checksum of the written file is
/// what checkpoints record.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);
std::uint64_t file_checksum(const std::string& path);

}  // namespace transearch
