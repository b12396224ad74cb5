// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Stage wiring: corpus records -> translations -> token streams -> training
// pairs / search index / evaluation. Per-record work is pure, so it fans out
// over a small worker pool; results are merged in record order.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "transearch/checkpoint.hpp"
#include "transearch/corpus.hpp"
#include "transearch/external_tools.hpp"
#include "transearch/retrieval.hpp"
#include "transearch/ruleset.hpp"
#include "transearch/text.hpp"
#include "transearch/trainer.hpp"

namespace transearch {

struct PreparedPair {
  std::string id;
  TokenSeq translation_tokens;
  TokenSeq comment_tokens;
};

struct PrepareResult {
  std::vector<PreparedPair> pairs;
  int skipped = 0;  // failed compile/translation or empty token streams
};

/// Translates every record (using its embedded disassembly, or the external
/// toolchain when `tools` is given) and tokenizes both sides. Records that
/// cannot be compiled or translated are skipped and counted. Order is stable.
PrepareResult prepare_pairs(const std::vector<CorpusRecord>& records, const RuleSet& rules,
                            const ToolConfig* tools = nullptr,
                            const std::string& work_dir = "work");

/// Token streams of both sides, for vocabulary building.
void split_corpora(const std::vector<PreparedPair>& pairs, std::vector<TokenSeq>& translations,
                   std::vector<TokenSeq>& comments);

std::vector<TrainingPair> to_training_pairs(const std::vector<PreparedPair>& pairs,
                                            const Vocabulary& vocab,
                                            const Vocabulary* comment_vocab = nullptr);

/// Freshly initialized model; comment_vocab_rows > 0 switches the comment
/// encoder to its own embedding matrix (the two-vocabulary configuration).
SiameseModel<float> init_model(int vocab_rows, int comment_vocab_rows, const TrainConfig& config);

/// TEncoder embeddings of every pair's translation, ready for the index.
SearchIndex index_from_pairs(const SiameseModel<float>& model,
                             const std::vector<PreparedPair>& pairs, const Vocabulary& vocab,
                             const TrainConfig& config, std::uint64_t vocab_checksum,
                             std::uint64_t ruleset_checksum);

/// Distractor evaluation of a prepared test set against a trained model.
EvalOutcome evaluate_pairs(const SiameseModel<float>& model,
                           const std::vector<PreparedPair>& pairs, const Vocabulary& vocab,
                           const Vocabulary* comment_vocab, const TrainConfig& config,
                           int cutoff = 10);

}  // namespace transearch
