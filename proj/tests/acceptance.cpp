// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "transearch/checkpoint.hpp"
#include "transearch/disasm.hpp"
#include "transearch/pipeline.hpp"
#include "transearch/retrieval.hpp"
#include "transearch/ruleset.hpp"
#include "transearch/text.hpp"
#include "transearch/trainer.hpp"
#include "transearch/translator.hpp"
#include "test_util.hpp"
#include "toy_corpus.hpp"

using namespace transearch;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

template <typename Fn>
void run_criterion(const std::string& name, double budget_seconds, Fn&& fn) {
  Outcome outcome;
  outcome.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    outcome.detail = fn(outcome.pass);
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  outcome.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (outcome.pass && budget_seconds > 0.0 && outcome.seconds > budget_seconds) {
    outcome.pass = false;
    outcome.detail += " [over the " + std::to_string(budget_seconds) + " s budget]";
  }
  std::printf("[%s] %-28s (%7.2f s)  %s\n", outcome.pass ? "PASS" : "FAIL",
              outcome.name.c_str(), outcome.seconds, outcome.detail.c_str());
  std::fflush(stdout);
  g_outcomes.push_back(outcome);
}

const RuleSet& rules() {
  static const RuleSet rs = load_rules_file(test_util::rules_path());
  return rs;
}

std::string substitute_words(std::string text,
                             const std::vector<std::pair<std::string, std::string>>& map) {
  std::string out, word;
  auto emit = [&]() {
    for (const auto& [from, to] : map)
      if (word == from) {
        out += to;
        word.clear();
        return;
      }
    out += word;
    word.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') word.push_back(c);
    else {
      emit();
      out.push_back(c);
    }
  }
  emit();
  return out;
}

// ---------------------------------------------------------------- criterion 1

std::string translation_equivalence(bool& pass) {
  const auto for_methods = parse_disassembly(
      test_util::read_file(test_util::fixture_path("for_loop_sum.disasm")));
  const auto while_methods = parse_disassembly(
      test_util::read_file(test_util::fixture_path("while_loop_sum.disasm")));
  const Translation a = translate_method(for_methods[1], rules());
  const Translation b = translate_method(while_methods[1], rules());
  const std::vector<std::pair<std::string, std::string>> renames = {
      {"result", "sum"}, {"j", "i"}, {"arr", "array"}};
  if (a.sentences.size() != b.sentences.size()) {
    pass = false;
    return "sentence counts differ";
  }
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    if (a.sentences[i].first != b.sentences[i].first ||
        a.sentences[i].second != substitute_words(b.sentences[i].second, renames)) {
      pass = false;
      return "mismatch at instruction " + std::to_string(a.sentences[i].first);
    }
  }
  pass = true;
  return "loop variants identical after variable renaming (" +
         std::to_string(a.sentences.size()) + " sentences)";
}

// ---------------------------------------------------------------- criterion 2

std::string placeholder_fidelity(bool& pass) {
  const auto methods = parse_disassembly(
      test_util::read_file(test_util::fixture_path("for_loop_sum.disasm")));
  const Translation t = translate_method(methods[1], rules());

  // hand-simulated transcript of the shipped rules over the fixture
  const std::vector<std::pair<int, std::string>> oracle = {
      {0, "push int constant 0 onto the operand stack"},
      {1, "store int 0 into local variable sum"},
      {2, "push int constant 0 onto the operand stack"},
      {3, "store int 0 into local variable i"},
      {4, "load int from local variable i"},
      {5, "load reference from local variable array"},
      {6, "get length of array array"},
      {7, "if int value is greater than or equal to int i jump to instruction 22"},
      {10, "load int from local variable sum"},
      {11, "load reference from local variable array"},
      {12, "load int from local variable i"},
      {13, "load int at index i from array array"},
      {14, "add int value and sum"},
      {15, "store int value into local variable sum"},
      {16, "increment local variable i by constant 1"},
      {19, "jump to instruction 4"},
      {22, "load int from local variable sum"},
      {23, "return int sum from method"},
  };
  if (t.sentences.size() != oracle.size()) {
    pass = false;
    return "sentence count " + std::to_string(t.sentences.size());
  }
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    if (t.sentences[i] != oracle[i]) {
      pass = false;
      return "transcript diverges at instruction " + std::to_string(oracle[i].first);
    }
  }
  const std::string& store_sentence = t.sentences[1].second;
  const std::string& branch_sentence = t.sentences[7].second;
  pass = store_sentence.find("sum") != std::string::npos &&
         branch_sentence.find("22") != std::string::npos;
  return pass ? "store names the variable, branch names target 22" : "context words missing";
}

// ---------------------------------------------------------------- criterion 3

std::string ruleset_completeness(bool& pass) {
  const ValidationReport report = validate_ruleset(rules());
  std::size_t category_mismatches = 0;
  for (const auto& [opcode, category] : reference_categories()) {
    const TranslationRule* rule = rules().find(opcode);
    if (rule == nullptr || rule->category != category) ++category_mismatches;
  }
  pass = report.missing.empty() && report.violations.empty() && category_mismatches == 0;
  std::ostringstream detail;
  detail << report.missing.size() << " missing, " << report.violations.size() << " violations, "
         << category_mismatches << " category mismatches over "
         << reference_categories().size() << " opcodes";
  return detail.str();
}

// ---------------------------------------------------------------- criterion 4

// independent metric oracles, written from the definitions
double oracle_success_rate(const std::vector<int>& franks, int k) {
  int hits = 0;
  for (int frank : franks) {
    bool in_top = false;
    for (int r = 1; r <= k; ++r)
      if (frank == r) in_top = true;
    if (in_top) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(franks.size());
}

double oracle_mrr(const std::vector<int>& franks, int cutoff) {
  double sum = 0.0;
  for (int frank : franks)
    for (int r = 1; r <= cutoff; ++r)
      if (frank == r) sum += 1.0 / static_cast<double>(r);
  return sum / static_cast<double>(franks.size());
}

std::string metric_oracle_equivalence(bool& pass) {
  Rng rng(20260809);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + rng.uniform_int(60);
    std::vector<int> franks;
    for (int i = 0; i < n; ++i) {
      const int value = rng.uniform_int(16);
      franks.push_back(value == 0 ? kNotFound : value);
    }
    for (int k : {1, 3, 5, 10})
      if (success_rate_at_k(franks, k) != oracle_success_rate(franks, k)) ++mismatches;
    if (mrr(franks, 10) != oracle_mrr(franks, 10)) ++mismatches;
  }
  const double fixed = mrr({1, 2, 10}, 10);
  const bool fixed_ok = std::abs(fixed - (1.0 + 0.5 + 0.1) / 3.0) <= 1e-9;
  const bool beyond_ok = mrr({11}, 10) == 0.0 && success_rate_at_k({11}, 10) == 0.0;
  pass = mismatches == 0 && fixed_ok && beyond_ok;
  std::ostringstream detail;
  detail << mismatches << " oracle mismatches over 1000 lists; mrr([1,2,10])=" << fixed;
  return detail.str();
}

// ---------------------------------------------------------------- criterion 5

std::string gradient_correctness(bool& pass) {
  TrainConfig config;
  config.margin = 0.6f;
  config.dropout = 0.0f;
  config.max_sequence_length = 8;

  const double step = 1e-4;
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 20 && seed < 200; ++seed) {
    Rng rng(seed);
    SiameseModel<double> model;
    const int vocab = 12, m = 8, h = 8;
    model.embeddings = MatrixX<double>::Zero(vocab, m);
    for (int r = 1; r < vocab; ++r)
      for (int c = 0; c < m; ++c) model.embeddings(r, c) = rng.uniform(-0.3, 0.3);
    Rng t_rng(seed * 31 + 1), c_rng(seed * 31 + 2);
    model.translation_encoder = init_encoder<double>(m, h, t_rng);
    model.comment_encoder = init_encoder<double>(m, h, c_rng);

    std::vector<TrainingPair> pairs(2);
    for (int p = 0; p < 2; ++p) {
      pairs[p].snippet_id = "g" + std::to_string(p);
      const int t_len = 2 + rng.uniform_int(5);
      const int c_len = 2 + rng.uniform_int(5);
      for (int i = 0; i < t_len; ++i)
        pairs[p].translation_ids.push_back(1 + rng.uniform_int(vocab - 1));
      for (int i = 0; i < c_len; ++i)
        pairs[p].comment_ids.push_back(1 + rng.uniform_int(vocab - 1));
    }
    const std::vector<Triplet> triplets = {{0, 1}};
    const double base = static_cast<double>(mean_loss(model, pairs, triplets, config));
    if (base < 1e-3) continue;  // hinge inactive or too close to the kink
    ++checked;

    auto grads = zeros_like(model);
    train_batch_gradients(model, pairs, triplets, config, grads, nullptr);
    visit_tensor_pairs(model, grads, [&](auto& p, auto& g) {
      for (Index r = 0; r < p.rows(); ++r)
        for (Index c = 0; c < p.cols(); ++c) {
          const double saved = p(r, c);
          p(r, c) = saved + step;
          const double up = static_cast<double>(mean_loss(model, pairs, triplets, config));
          p(r, c) = saved - step;
          const double down = static_cast<double>(mean_loss(model, pairs, triplets, config));
          p(r, c) = saved;
          const double numeric = (up - down) / (2 * step);
          const double analytic = g(r, c);
          const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
          worst = std::max(worst, std::abs(analytic - numeric) / denom);
        }
    });
  }
  pass = checked >= 20 && worst <= 1e-3;
  std::ostringstream detail;
  detail << checked << " instances, max relative error " << worst;
  return detail.str();
}

// ------------------------------------------------------- criteria 6, 7 and 8

struct ToySplit {
  std::vector<PreparedPair> train;
  std::vector<PreparedPair> held_out;
};

ToySplit prepare_toy_split(int train_count, int held_out_count, std::uint64_t seed) {
  const auto records = toy::generate_corpus(train_count + held_out_count, seed);
  const PrepareResult prepared = prepare_pairs(records, rules(), nullptr, "unused");
  if (static_cast<int>(prepared.pairs.size()) != train_count + held_out_count)
    throw Error("toy corpus preparation dropped records");
  ToySplit split;
  split.train.assign(prepared.pairs.begin(), prepared.pairs.begin() + train_count);
  split.held_out.assign(prepared.pairs.begin() + train_count, prepared.pairs.end());
  return split;
}

TrainConfig toy_config(std::uint64_t seed) {
  TrainConfig config;
  config.batch_size = 32;
  config.embed_dim = 96;
  config.hidden_dim = 96;
  config.margin = 0.6f;
  config.learning_rate = 1.5e-3f;
  config.dropout = 0.1f;
  config.epochs = 200;
  config.seed = seed;
  return config;
}

double random_baseline_mrr(int pool, int cutoff) {
  double sum = 0.0;
  for (int r = 1; r <= cutoff; ++r) sum += 1.0 / r;
  return sum / pool;
}

std::string desk_scale_learning(bool& pass) {
  const ToySplit split = prepare_toy_split(200, 50, 1001);
  const TrainConfig config = toy_config(7);

  std::vector<TokenSeq> translations, comments;
  split_corpora(split.train, translations, comments);
  const Vocabulary vocab = build_shared_vocabulary(translations, comments, 600);
  const std::vector<TrainingPair> pairs = to_training_pairs(split.train, vocab);

  SiameseModel<float> model = init_model(vocab.size(), 0, config);
  const TrainResult<float> result = train_model(std::move(model), pairs, config);

  const EvalOutcome train_eval = evaluate_pairs(result.model, split.train, vocab, nullptr, config);
  const EvalOutcome held_eval =
      evaluate_pairs(result.model, split.held_out, vocab, nullptr, config);
  const double threshold = 3.0 * random_baseline_mrr(50, 10);

  pass = train_eval.mrr >= 0.9 && held_eval.mrr >= threshold;
  std::ostringstream detail;
  detail << "train MRR " << train_eval.mrr << " (need 0.9); held-out MRR " << held_eval.mrr
         << " (need " << threshold << ")";
  return detail.str();
}

std::string shared_mapping_ablation(bool& pass) {
  const ToySplit split = prepare_toy_split(200, 50, 1001);
  const TrainConfig config = toy_config(7);

  std::vector<TokenSeq> translations, comments;
  split_corpora(split.train, translations, comments);

  // shared configuration: one vocabulary, one embedding matrix
  const Vocabulary shared_vocab = build_shared_vocabulary(translations, comments, 600);
  const std::vector<TrainingPair> shared_pairs = to_training_pairs(split.train, shared_vocab);
  const TrainResult<float> shared = train_model(
      init_model(shared_vocab.size(), 0, config), shared_pairs, config);
  const double shared_mrr =
      evaluate_pairs(shared.model, split.held_out, shared_vocab, nullptr, config).mrr;

  // two-vocabulary configuration: per-side vocabularies and matrices
  const std::vector<TokenSeq> empty;
  const Vocabulary t_vocab = build_shared_vocabulary(translations, empty, 600);
  const Vocabulary c_vocab = build_shared_vocabulary(empty, comments, 600);
  const std::vector<TrainingPair> split_pairs =
      to_training_pairs(split.train, t_vocab, &c_vocab);
  const TrainResult<float> twovocab = train_model(
      init_model(t_vocab.size(), c_vocab.size(), config), split_pairs, config);
  const double twovocab_mrr =
      evaluate_pairs(twovocab.model, split.held_out, t_vocab, &c_vocab, config).mrr;

  pass = shared_mrr >= twovocab_mrr;
  std::ostringstream detail;
  detail << "shared MRR " << shared_mrr << " vs two-vocabulary MRR " << twovocab_mrr;
  return detail.str();
}

std::string determinism(bool& pass) {
  const fs::path dir = fs::temp_directory_path() / "transearch_acceptance_determinism";
  fs::create_directories(dir);

  auto run = [&](const std::string& tag) {
    const ToySplit split = prepare_toy_split(60, 20, 4242);
    TrainConfig config = toy_config(11);
    config.epochs = 25;
    config.embed_dim = 24;
    config.hidden_dim = 24;

    std::vector<TokenSeq> translations, comments;
    split_corpora(split.train, translations, comments);
    const Vocabulary vocab = build_shared_vocabulary(translations, comments, 600);
    const std::string vocab_path = (dir / ("vocab_" + tag + ".txt")).string();
    save_vocabulary(vocab, vocab_path);

    const std::vector<TrainingPair> pairs = to_training_pairs(split.train, vocab);
    const TrainResult<float> result =
        train_model(init_model(vocab.size(), 0, config), pairs, config);

    Checkpoint checkpoint;
    checkpoint.config = config;
    checkpoint.vocab_checksum = file_checksum(vocab_path);
    checkpoint.ruleset_checksum = file_checksum(test_util::rules_path());
    checkpoint.model = result.model;
    checkpoint.moments = result.moments;
    checkpoint.epoch = result.selected_epoch;
    const std::string ckpt_path = (dir / ("model_" + tag + ".ckpt")).string();
    save_checkpoint(checkpoint, ckpt_path);

    const EvalOutcome eval = evaluate_pairs(result.model, split.held_out, vocab, nullptr, config);
    return std::make_pair(test_util::read_file(ckpt_path), eval.report());
  };

  const auto [bytes_a, report_a] = run("a");
  const auto [bytes_b, report_b] = run("b");
  std::error_code ec;
  fs::remove_all(dir, ec);

  pass = bytes_a == bytes_b && report_a == report_b && !bytes_a.empty();
  std::ostringstream detail;
  detail << "checkpoints " << (bytes_a == bytes_b ? "identical" : "differ") << " ("
         << bytes_a.size() << " bytes); reports "
         << (report_a == report_b ? "identical" : "differ");
  return detail.str();
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion("translation-equivalence", 1.0, translation_equivalence);
  run_criterion("placeholder-fidelity", 1.0, placeholder_fidelity);
  run_criterion("ruleset-completeness", 0.0, ruleset_completeness);
  run_criterion("metric-oracle-equivalence", 0.0, metric_oracle_equivalence);
  run_criterion("gradient-correctness", 60.0, gradient_correctness);
  run_criterion("desk-scale-learning", 1800.0, desk_scale_learning);
  run_criterion("shared-mapping-ablation", 0.0, shared_mapping_ablation);
  run_criterion("determinism", 0.0, determinism);

  int failures = 0;
  for (const auto& outcome : g_outcomes)
    if (!outcome.pass) ++failures;
  std::printf("%zu criteria, %d failed\n", g_outcomes.size(), failures);
  return failures == 0 ? 0 : 1;
}
