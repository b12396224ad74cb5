// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/text.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "transearch/errors.hpp"
#include "test_util.hpp"

using namespace transearch;

TEST_CASE("tokenize splits words, identifiers and case") {
  CHECK(tokenize("store int 0 into local variable sum") ==
        TokenSeq{"store", "int", "0", "into", "local", "variable", "sum"});
  CHECK(tokenize("calArraySum") == TokenSeq{"cal", "array", "sum"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("snake_case_name") == TokenSeq{"snake", "case", "name"});
  CHECK(tokenize("HTTPServer") == TokenSeq{"http", "server"});
  CHECK(tokenize("var2") == TokenSeq{"var", "2"});
  CHECK(tokenize("  ,;.()  ").empty());
}

TEST_CASE("translation token stream ends sentences with the boundary token") {
  Translation t;
  t.sentences = {{0, "push int constant 0"}, {1, "store int 0 into sum"}};
  CHECK(translation_tokens(t) ==
        TokenSeq{"push", "int", "constant", "0", ".", "store", "int", "0", "into", "sum", "."});
}

TEST_CASE("shared vocabulary gives one id per word across corpora") {
  const std::vector<TokenSeq> translations = {{"get", "length", "of", "array"}};
  const std::vector<TokenSeq> comments = {{"compute", "the", "length"}};
  const Vocabulary v = build_shared_vocabulary(translations, comments, 50);
  const int from_translation = v.id_of("length");
  CHECK(from_translation != Vocabulary::kUnkId);
  CHECK(map_tokens(v, {"length"})[0] == from_translation);
  // the word has a single id regardless of which corpus it came from
  CHECK(std::count(v.words.begin(), v.words.end(), "length") == 1);
}

TEST_CASE("vocabulary keeps the top n-2 by frequency") {
  const std::vector<TokenSeq> translations = {{"a", "a", "a", "a", "a", "b", "b"}};
  const std::vector<TokenSeq> comments = {};
  const Vocabulary v = build_shared_vocabulary(translations, comments, 3);
  CHECK(v.words == std::vector<std::string>{"<pad>", "<unk>", "a"});
}

TEST_CASE("tie-break is lexicographic") {
  const std::vector<TokenSeq> translations = {{"b", "b", "a", "a"}};
  const Vocabulary v = build_shared_vocabulary(translations, {}, 4);
  CHECK(v.words == std::vector<std::string>{"<pad>", "<unk>", "a", "b"});
}

TEST_CASE("vocabulary is permutation-invariant over document order") {
  const std::vector<TokenSeq> docs1 = {{"x", "y"}, {"z", "x"}};
  const std::vector<TokenSeq> docs2 = {{"z", "x"}, {"x", "y"}};
  CHECK(build_shared_vocabulary(docs1, {}, 10).words ==
        build_shared_vocabulary(docs2, {}, 10).words);
}

TEST_CASE("empty corpus is rejected") {
  CHECK_THROWS_AS(build_shared_vocabulary({}, {}, 10), EmptyCorpus);
  CHECK_THROWS_AS(build_shared_vocabulary({{}}, {{}}, 10), EmptyCorpus);
}

TEST_CASE("map_tokens sends unknown words to <unk>") {
  const Vocabulary v = build_shared_vocabulary({{"known"}}, {}, 3);
  CHECK(map_tokens(v, {"zzz"}) == std::vector<int>{Vocabulary::kUnkId});
  CHECK(map_tokens(v, {}).empty());
  CHECK(map_tokens(v, {"known"}) == std::vector<int>{2});
}

TEST_CASE("embedding init is seeded, bounded and zero for <pad>") {
  const Vocabulary v = build_shared_vocabulary({{"a", "b", "c"}}, {}, 5);
  const MatrixX<double> e1 = init_embeddings<double>(v, 16, 42);
  const MatrixX<double> e2 = init_embeddings<double>(v, 16, 42);
  const MatrixX<double> e3 = init_embeddings<double>(v, 16, 43);
  CHECK(e1 == e2);
  CHECK(e1 != e3);
  CHECK(e1.rows() == v.size());
  CHECK(e1.cols() == 16);
  CHECK(e1.row(0).isZero());
  CHECK(e1.maxCoeff() <= 0.1);
  CHECK(e1.minCoeff() >= -0.1);
  CHECK(e1.row(1).cwiseAbs().maxCoeff() > 0.0);  // <unk> row is trainable
}

TEST_CASE("vocabulary file round trip and checksum") {
  namespace fs = std::filesystem;
  const Vocabulary v = build_shared_vocabulary({{"push", "int", "constant"}}, {{"sum"}}, 8);
  const std::string path = (fs::temp_directory_path() / "transearch_vocab_test.txt").string();
  save_vocabulary(v, path);
  const Vocabulary loaded = load_vocabulary(path);
  CHECK(loaded.words == v.words);
  CHECK(loaded.id_of("push") == v.id_of("push"));
  const std::uint64_t sum1 = file_checksum(path);
  save_vocabulary(v, path);
  CHECK(file_checksum(path) == sum1);
  std::remove(path.c_str());
}
