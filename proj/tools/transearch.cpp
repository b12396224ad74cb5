// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: translate | build-vocab | train | index | search
// | evaluate. Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "transearch/checkpoint.hpp"
#include "transearch/corpus.hpp"
#include "transearch/disasm.hpp"
#include "transearch/errors.hpp"
#include "transearch/pipeline.hpp"
#include "transearch/retrieval.hpp"
#include "transearch/ruleset.hpp"
#include "transearch/translator.hpp"

namespace fs = std::filesystem;
using namespace transearch;

namespace {

std::string default_rules_path() {
  if (const char* env = std::getenv("TRANSEARCH_RULES_FILE")) return env;
#ifdef TRANSEARCH_DEFAULT_RULES
  return TRANSEARCH_DEFAULT_RULES;
#else
  return "data/rules.tsv";
#endif
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonOptions {
  std::string rules = default_rules_path();
  std::uint64_t seed = 0;
};

int cmd_translate(const std::string& input, bool from_source, const std::string& rules_path,
                  const std::string& graph_format, const std::string& graph_out,
                  const std::string& work_dir) {
  const RuleSet rules = load_rules_file(rules_path);
  std::string disassembly;
  if (from_source) {
    const ToolConfig tools = ToolConfig::from_env();
    disassembly = disassemble_external(read_text_file(input), work_dir, tools);
  } else {
    disassembly = read_text_file(input);
  }
  const auto methods = parse_disassembly(disassembly);
  std::string graphs;
  for (const auto& md : methods) {
    const Translation translation = translate_method(md, rules);
    std::cout << "# method: " << md.method_id << '\n';
    for (const auto& [index, sentence] : translation.sentences)
      std::cout << index << ":\t" << sentence << '\n';
    if (!graph_format.empty()) {
      graphs += export_graph(translation,
                             graph_format == "json" ? GraphFormat::kJson : GraphFormat::kDot);
      graphs += '\n';
    }
  }
  if (!graph_format.empty()) {
    if (graph_out.empty()) {
      std::cout << graphs;
    } else {
      std::ofstream out(graph_out, std::ios::binary | std::ios::trunc);
      if (!out) throw FileUnreadable(graph_out);
      out << graphs;
    }
  }
  return 0;
}

PrepareResult prepare_from_file(const std::string& corpus_path, const RuleSet& rules,
                                bool use_tools, const std::string& work_dir) {
  const CorpusReadResult corpus = read_corpus(corpus_path);
  std::cerr << "read " << corpus.records.size() << " records from " << corpus_path << " ("
            << corpus.skipped << " skipped)\n";
  const ToolConfig tools = ToolConfig::from_env();
  const PrepareResult prepared =
      prepare_pairs(corpus.records, rules, use_tools ? &tools : nullptr, work_dir);
  std::cerr << "prepared " << prepared.pairs.size() << " pairs (" << prepared.skipped
            << " skipped)\n";
  return prepared;
}

int cmd_build_vocab(const std::string& corpus_path, const std::string& rules_path, int size,
                    const std::string& out_path, const std::string& comment_out, bool use_tools,
                    const std::string& work_dir) {
  const RuleSet rules = load_rules_file(rules_path);
  const PrepareResult prepared = prepare_from_file(corpus_path, rules, use_tools, work_dir);
  std::vector<TokenSeq> translations, comments;
  split_corpora(prepared.pairs, translations, comments);
  if (comment_out.empty()) {
    const Vocabulary vocab = build_shared_vocabulary(translations, comments, size);
    save_vocabulary(vocab, out_path);
    std::cerr << "wrote " << vocab.size() << " words to " << out_path << '\n';
  } else {
    const std::vector<TokenSeq> empty;
    const Vocabulary t_vocab = build_shared_vocabulary(translations, empty, size);
    const Vocabulary c_vocab = build_shared_vocabulary(empty, comments, size);
    save_vocabulary(t_vocab, out_path);
    save_vocabulary(c_vocab, comment_out);
    std::cerr << "wrote " << t_vocab.size() << " + " << c_vocab.size() << " words\n";
  }
  return 0;
}

int cmd_train(const std::string& corpus_path, const std::string& rules_path,
              const std::string& vocab_path, const std::string& comment_vocab_path,
              const std::string& out_path, TrainConfig config, bool use_tools,
              const std::string& work_dir, const std::string& log_path) {
  const RuleSet rules = load_rules_file(rules_path);
  const Vocabulary vocab = load_vocabulary(vocab_path);
  std::optional<Vocabulary> comment_vocab;
  if (!comment_vocab_path.empty()) comment_vocab = load_vocabulary(comment_vocab_path);
  config.vocab_size = vocab.size();

  const PrepareResult prepared = prepare_from_file(corpus_path, rules, use_tools, work_dir);
  const std::vector<TrainingPair> pairs = to_training_pairs(
      prepared.pairs, vocab, comment_vocab.has_value() ? &*comment_vocab : nullptr);

  SiameseModel<float> model =
      init_model(vocab.size(), comment_vocab.has_value() ? comment_vocab->size() : 0, config);

  std::ofstream log_file;
  std::ostream* log = &std::cout;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::trunc);
    if (!log_file) throw FileUnreadable(log_path);
    log = &log_file;
  }
  const TrainResult<float> result = train_model(std::move(model), pairs, config, log);

  Checkpoint checkpoint;
  checkpoint.config = config;
  checkpoint.vocab_checksum = file_checksum(vocab_path);
  checkpoint.ruleset_checksum = file_checksum(rules_path);
  checkpoint.comment_vocab_checksum =
      comment_vocab_path.empty() ? 0 : file_checksum(comment_vocab_path);
  checkpoint.model = result.model;
  checkpoint.moments = result.moments;
  checkpoint.epoch = result.selected_epoch;
  save_checkpoint(checkpoint, out_path);
  std::cerr << "saved checkpoint (epoch " << result.selected_epoch << ") to " << out_path << '\n';
  return 0;
}

Checkpoint load_verified(const std::string& checkpoint_path, const std::string& vocab_path,
                         const std::string& rules_path, const std::string& comment_vocab_path) {
  Checkpoint checkpoint = load_checkpoint(checkpoint_path);
  verify_checkpoint_artifacts(checkpoint, vocab_path, rules_path, comment_vocab_path);
  return checkpoint;
}

int cmd_index(const std::string& corpus_path, const std::string& rules_path,
              const std::string& vocab_path, const std::string& checkpoint_path,
              const std::string& out_path, bool use_tools, const std::string& work_dir,
              const std::string& comment_vocab_path) {
  const RuleSet rules = load_rules_file(rules_path);
  const Vocabulary vocab = load_vocabulary(vocab_path);
  const Checkpoint checkpoint =
      load_verified(checkpoint_path, vocab_path, rules_path, comment_vocab_path);
  const PrepareResult prepared = prepare_from_file(corpus_path, rules, use_tools, work_dir);
  const SearchIndex index =
      index_from_pairs(checkpoint.model, prepared.pairs, vocab, checkpoint.config,
                       checkpoint.vocab_checksum, checkpoint.ruleset_checksum);
  save_index(index, out_path);
  std::cerr << "indexed " << index.ids.size() << " snippets to " << out_path << '\n';
  return 0;
}

int cmd_search(const std::string& index_path, const std::string& rules_path,
               const std::string& vocab_path, const std::string& checkpoint_path,
               const std::string& query, int k, const std::string& comment_vocab_path) {
  if (!fs::exists(index_path)) throw Error("index not found: " + index_path);
  const Checkpoint checkpoint =
      load_verified(checkpoint_path, vocab_path, rules_path, comment_vocab_path);
  const SearchIndex index = load_index(index_path);
  if (index.ruleset_checksum != checkpoint.ruleset_checksum ||
      index.vocab_checksum != checkpoint.vocab_checksum)
    throw ChecksumMismatch("index artifacts do not match the checkpoint");

  const Vocabulary query_vocab = comment_vocab_path.empty()
                                     ? load_vocabulary(vocab_path)
                                     : load_vocabulary(comment_vocab_path);
  const std::vector<int> ids = map_tokens(query_vocab, tokenize(query));
  const VectorF embedding =
      embed_sequence(checkpoint.model.comment_encoder,
                     checkpoint.model.embeddings_for_comments(), ids,
                     checkpoint.config.max_sequence_length);
  for (const RankedResult& result : search(index, embedding, k))
    std::cout << result.rank << '\t' << result.snippet_id << '\t' << result.score << '\n';
  return 0;
}

int cmd_evaluate(const std::string& test_path, const std::string& rules_path,
                 const std::string& vocab_path, const std::string& checkpoint_path, int cutoff,
                 bool use_tools, const std::string& work_dir,
                 const std::string& comment_vocab_path) {
  const RuleSet rules = load_rules_file(rules_path);
  const Vocabulary vocab = load_vocabulary(vocab_path);
  std::optional<Vocabulary> comment_vocab;
  if (!comment_vocab_path.empty()) comment_vocab = load_vocabulary(comment_vocab_path);
  const Checkpoint checkpoint =
      load_verified(checkpoint_path, vocab_path, rules_path, comment_vocab_path);
  const PrepareResult prepared = prepare_from_file(test_path, rules, use_tools, work_dir);
  const EvalOutcome outcome =
      evaluate_pairs(checkpoint.model, prepared.pairs, vocab,
                     comment_vocab.has_value() ? &*comment_vocab : nullptr, checkpoint.config,
                     cutoff);
  std::cout << outcome.report();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"code search over execution-simulated method translations"};
  app.require_subcommand(1);

  std::string rules_path = default_rules_path();
  std::uint64_t seed = 0;
  std::string work_dir = "work";
  app.add_option("--rules", rules_path, "translation rule file");
  app.add_option("--seed", seed, "seed controlling all randomness");
  app.add_option("--work-dir", work_dir, "scratch directory for the external toolchain");

  auto* translate = app.add_subcommand("translate", "disassembly/source to sentences");
  std::string tr_in, tr_graph, tr_graph_out;
  bool tr_source = false;
  translate->add_option("--in", tr_in, "input file")->required();
  translate->add_flag("--source", tr_source, "compile and disassemble the input first");
  translate->add_option("--graph", tr_graph, "dependency graph format (dot|json)")
      ->check(CLI::IsMember({"dot", "json"}));
  translate->add_option("--graph-out", tr_graph_out, "write graphs to a file");

  auto* build_vocab = app.add_subcommand("build-vocab", "build the shared vocabulary");
  std::string bv_corpus, bv_out, bv_comment_out;
  int bv_size = 15000;
  bool bv_tools = false;
  build_vocab->add_option("--corpus", bv_corpus, "training corpus (jsonl)")->required();
  build_vocab->add_option("--out", bv_out, "vocabulary output file")->required();
  build_vocab->add_option("--size", bv_size, "vocabulary size");
  build_vocab->add_option("--comment-out", bv_comment_out,
                          "write a separate comment vocabulary (two-vocabulary setup)");
  build_vocab->add_flag("--use-tools", bv_tools, "compile records lacking disassembly");

  auto* train = app.add_subcommand("train", "train the two encoders");
  std::string t_corpus, t_vocab, t_comment_vocab, t_out, t_log;
  bool t_tools = false;
  TrainConfig config;
  train->add_option("--corpus", t_corpus, "training corpus (jsonl)")->required();
  train->add_option("--vocab", t_vocab, "vocabulary file")->required();
  train->add_option("--comment-vocab", t_comment_vocab,
                    "separate comment vocabulary (two-vocabulary setup)");
  train->add_option("--out", t_out, "checkpoint output")->required();
  train->add_option("--epochs", config.epochs, "training epochs");
  train->add_option("--batch-size", config.batch_size, "mini-batch size");
  train->add_option("--embed-dim", config.embed_dim, "word embedding size");
  train->add_option("--hidden-dim", config.hidden_dim, "recurrent hidden size");
  train->add_option("--margin", config.margin, "ranking-loss margin");
  train->add_option("--learning-rate", config.learning_rate, "optimizer learning rate");
  train->add_option("--dropout", config.dropout, "dropout rate");
  train->add_option("--log", t_log, "training log file (default: stdout)");
  train->add_flag("--use-tools", t_tools, "compile records lacking disassembly");

  auto* index_cmd = app.add_subcommand("index", "embed a corpus into a search index");
  std::string i_corpus, i_vocab, i_ckpt, i_out, i_comment_vocab;
  bool i_tools = false;
  index_cmd->add_option("--corpus", i_corpus, "corpus to index (jsonl)")->required();
  index_cmd->add_option("--vocab", i_vocab, "vocabulary file")->required();
  index_cmd->add_option("--checkpoint", i_ckpt, "trained checkpoint")->required();
  index_cmd->add_option("--comment-vocab", i_comment_vocab, "separate comment vocabulary");
  index_cmd->add_option("--out", i_out, "index output file")->required();
  index_cmd->add_flag("--use-tools", i_tools, "compile records lacking disassembly");

  auto* search_cmd = app.add_subcommand("search", "ranked search against an index");
  std::string s_index, s_vocab, s_ckpt, s_query, s_comment_vocab;
  int s_k = 10;
  search_cmd->add_option("--index", s_index, "index file")->required();
  search_cmd->add_option("--vocab", s_vocab, "vocabulary file")->required();
  search_cmd->add_option("--checkpoint", s_ckpt, "trained checkpoint")->required();
  search_cmd->add_option("--comment-vocab", s_comment_vocab, "separate comment vocabulary");
  search_cmd->add_option("--query", s_query, "natural-language query")->required();
  search_cmd->add_option("-k,--top-k", s_k, "results to return");

  auto* evaluate = app.add_subcommand("evaluate", "distractor-protocol evaluation");
  std::string e_test, e_vocab, e_ckpt, e_comment_vocab;
  int e_cutoff = 10;
  bool e_tools = false;
  evaluate->add_option("--test", e_test, "test corpus (jsonl)")->required();
  evaluate->add_option("--vocab", e_vocab, "vocabulary file")->required();
  evaluate->add_option("--checkpoint", e_ckpt, "trained checkpoint")->required();
  evaluate->add_option("--comment-vocab", e_comment_vocab, "separate comment vocabulary");
  evaluate->add_option("--cutoff", e_cutoff, "rank cutoff");
  evaluate->add_flag("--use-tools", e_tools, "compile records lacking disassembly");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    config.seed = seed;
    if (translate->parsed())
      return cmd_translate(tr_in, tr_source, rules_path, tr_graph, tr_graph_out, work_dir);
    if (build_vocab->parsed())
      return cmd_build_vocab(bv_corpus, rules_path, bv_size, bv_out, bv_comment_out, bv_tools,
                             work_dir);
    if (train->parsed())
      return cmd_train(t_corpus, rules_path, t_vocab, t_comment_vocab, t_out, config, t_tools,
                       work_dir, t_log);
    if (index_cmd->parsed())
      return cmd_index(i_corpus, rules_path, i_vocab, i_ckpt, i_out, i_tools, work_dir,
                       i_comment_vocab);
    if (search_cmd->parsed())
      return cmd_search(s_index, rules_path, s_vocab, s_ckpt, s_query, s_k, s_comment_vocab);
    if (evaluate->parsed())
      return cmd_evaluate(e_test, rules_path, e_vocab, e_ckpt, e_cutoff, e_tools, work_dir,
                          e_comment_vocab);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
