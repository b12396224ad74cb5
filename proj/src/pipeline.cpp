// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <future>
#include <thread>

#include "transearch/disasm.hpp"
#include "transearch/translator.hpp"

namespace transearch {
namespace {

// "public CalArraySum()" has no return type before the name: a constructor.
bool is_constructor_signature(const std::string& method_id) {
  std::vector<std::string> words;
  std::string word;
  for (char c : method_id) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!word.empty()) words.push_back(std::move(word));
      word.clear();
    } else {
      word.push_back(c);
    }
  }
  if (!word.empty()) words.push_back(std::move(word));

  static const std::vector<std::string> modifiers = {
      "public", "private", "protected", "static",       "final",
      "native", "abstract", "default",  "synchronized", "strictfp"};
  std::size_t i = 0;
  while (i < words.size() &&
         std::find(modifiers.begin(), modifiers.end(), words[i]) != modifiers.end())
    ++i;
  // a constructor's first remaining token is "Name(...)"; a normal method
  // still has its return type before that
  return i + 1 == words.size() && words[i].find('(') != std::string::npos;
}

// Translation token stream of one record: all non-constructor methods in
// order (constructors only when nothing else is there).
TokenSeq record_translation_tokens(const std::string& disassembly, const RuleSet& rules) {
  const std::vector<MethodDisassembly> methods = parse_disassembly(disassembly);
  std::vector<const MethodDisassembly*> selected;
  for (const auto& md : methods)
    if (!is_constructor_signature(md.method_id)) selected.push_back(&md);
  if (selected.empty())
    for (const auto& md : methods) selected.push_back(&md);

  TokenSeq tokens;
  for (const MethodDisassembly* md : selected) {
    const Translation translation = translate_method(*md, rules);
    TokenSeq part = translation_tokens(translation);
    tokens.insert(tokens.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return tokens;
}

}  // namespace

PrepareResult prepare_pairs(const std::vector<CorpusRecord>& records, const RuleSet& rules,
                            const ToolConfig* tools, const std::string& work_dir) {
  std::vector<std::optional<PreparedPair>> slots(records.size());
  std::atomic<int> skipped{0};

  auto process = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CorpusRecord& record = records[i];
      try {
        std::string disassembly = record.disassembly;
        if (disassembly.empty()) {
          if (tools == nullptr) {
            ++skipped;
            continue;
          }
          disassembly = disassemble_external(record.code, work_dir, *tools);
        }
        PreparedPair pair;
        pair.id = record.id;
        pair.translation_tokens = record_translation_tokens(disassembly, rules);
        pair.comment_tokens = tokenize(record.comment);
        if (pair.translation_tokens.empty() || pair.comment_tokens.empty()) {
          ++skipped;
          continue;
        }
        slots[i] = std::move(pair);
      } catch (const Error&) {
        ++skipped;  // compile failure, unknown opcode, simulated overflow
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(1, records.size()));
  if (workers <= 1 || records.size() < 16) {
    process(0, records.size());
  } else {
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (records.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(records.size(), begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, process, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  PrepareResult result;
  result.skipped = skipped.load();
  for (auto& slot : slots)
    if (slot.has_value()) result.pairs.push_back(std::move(*slot));
  return result;
}

void split_corpora(const std::vector<PreparedPair>& pairs, std::vector<TokenSeq>& translations,
                   std::vector<TokenSeq>& comments) {
  translations.clear();
  comments.clear();
  translations.reserve(pairs.size());
  comments.reserve(pairs.size());
  for (const auto& pair : pairs) {
    translations.push_back(pair.translation_tokens);
    comments.push_back(pair.comment_tokens);
  }
}

std::vector<TrainingPair> to_training_pairs(const std::vector<PreparedPair>& pairs,
                                            const Vocabulary& vocab,
                                            const Vocabulary* comment_vocab) {
  std::vector<TrainingPair> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    TrainingPair tp;
    tp.snippet_id = pair.id;
    tp.translation_ids = map_tokens(vocab, pair.translation_tokens);
    tp.comment_ids = map_tokens(comment_vocab != nullptr ? *comment_vocab : vocab,
                                pair.comment_tokens);
    if (tp.translation_ids.empty() || tp.comment_ids.empty()) continue;
    out.push_back(std::move(tp));
  }
  return out;
}

SiameseModel<float> init_model(int vocab_rows, int comment_vocab_rows, const TrainConfig& config) {
  SiameseModel<float> model;
  model.embeddings = MatrixF::Zero(vocab_rows, config.embed_dim);
  {
    Rng rng(derive_seed(config.seed, 0xE0BED5ULL));
    for (int r = 1; r < vocab_rows; ++r)
      for (int c = 0; c < config.embed_dim; ++c)
        model.embeddings(r, c) = static_cast<float>(rng.uniform(-0.1, 0.1));
  }
  if (comment_vocab_rows > 0) {
    model.comment_embeddings = MatrixF::Zero(comment_vocab_rows, config.embed_dim);
    Rng rng(derive_seed(config.seed, 0xE0BED6ULL));
    for (int r = 1; r < comment_vocab_rows; ++r)
      for (int c = 0; c < config.embed_dim; ++c)
        model.comment_embeddings(r, c) = static_cast<float>(rng.uniform(-0.1, 0.1));
  }
  Rng t_rng(derive_seed(config.seed, 0x7E2CULL));
  Rng c_rng(derive_seed(config.seed, 0xCE2CULL));
  model.translation_encoder = init_encoder<float>(config.embed_dim, config.hidden_dim, t_rng);
  model.comment_encoder = init_encoder<float>(config.embed_dim, config.hidden_dim, c_rng);
  return model;
}

SearchIndex index_from_pairs(const SiameseModel<float>& model,
                             const std::vector<PreparedPair>& pairs, const Vocabulary& vocab,
                             const TrainConfig& config, std::uint64_t vocab_checksum,
                             std::uint64_t ruleset_checksum) {
  std::vector<std::string> ids;
  MatrixF embeddings(static_cast<Index>(pairs.size()), config.hidden_dim);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ids.push_back(pairs[i].id);
    const std::vector<int> token_ids = map_tokens(vocab, pairs[i].translation_tokens);
    embeddings.row(static_cast<Index>(i)) =
        embed_sequence(model.translation_encoder, model.embeddings, token_ids,
                       config.max_sequence_length)
            .transpose();
  }
  SearchIndex index = build_index(std::move(ids), embeddings);
  index.vocab_checksum = vocab_checksum;
  index.ruleset_checksum = ruleset_checksum;
  return index;
}

EvalOutcome evaluate_pairs(const SiameseModel<float>& model,
                           const std::vector<PreparedPair>& pairs, const Vocabulary& vocab,
                           const Vocabulary* comment_vocab, const TrainConfig& config,
                           int cutoff) {
  std::vector<std::pair<VectorF, VectorF>> embedded;
  embedded.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const std::vector<int> t_ids = map_tokens(vocab, pair.translation_tokens);
    const std::vector<int> c_ids =
        map_tokens(comment_vocab != nullptr ? *comment_vocab : vocab, pair.comment_tokens);
    embedded.emplace_back(
        embed_sequence(model.comment_encoder, model.embeddings_for_comments(), c_ids,
                       config.max_sequence_length),
        embed_sequence(model.translation_encoder, model.embeddings, t_ids,
                       config.max_sequence_length));
  }
  return evaluate_distractor_protocol(embedded, cutoff);
}

}  // namespace transearch
