// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "transearch/errors.hpp"
#include "transearch/hash.hpp"

namespace transearch {
namespace {

enum class CharClass { kLower, kUpper, kDigit, kOther };

CharClass classify(unsigned char c) {
  if (std::islower(c)) return CharClass::kLower;
  if (std::isupper(c)) return CharClass::kUpper;
  if (std::isdigit(c)) return CharClass::kDigit;
  return CharClass::kOther;
}

void flush(std::string& word, TokenSeq& out) {
  if (word.empty()) return;
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  out.push_back(std::move(word));
  word.clear();
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string word;
  CharClass prev = CharClass::kOther;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    const CharClass cls = classify(c);
    if (cls == CharClass::kOther) {
      flush(word, out);
      prev = cls;
      continue;
    }
    const bool boundary =
        !word.empty() &&
        ((prev == CharClass::kLower && cls == CharClass::kUpper) ||          // calA|rray
         (prev == CharClass::kDigit && cls != CharClass::kDigit) ||          // 2|f
         (prev != CharClass::kDigit && cls == CharClass::kDigit) ||          // var|2
         (prev == CharClass::kUpper && cls == CharClass::kLower &&
          word.size() > 1));  // HTTPext -> HTTP|ext boundary sits before the last upper
    if (boundary) {
      if (prev == CharClass::kUpper && cls == CharClass::kLower) {
        const char carried = word.back();
        word.pop_back();
        flush(word, out);
        word.push_back(carried);
      } else {
        flush(word, out);
      }
    }
    word.push_back(static_cast<char>(c));
    prev = cls;
  }
  flush(word, out);
  return out;
}

TokenSeq translation_tokens(const Translation& translation) {
  TokenSeq out;
  for (const auto& [index, sentence] : translation.sentences) {
    TokenSeq words = tokenize(sentence);
    out.insert(out.end(), std::make_move_iterator(words.begin()),
               std::make_move_iterator(words.end()));
    out.push_back(".");
  }
  return out;
}

Vocabulary build_shared_vocabulary(const std::vector<TokenSeq>& translations,
                                   const std::vector<TokenSeq>& comments, int n) {
  if (n < 3) throw std::invalid_argument("vocabulary size must be at least 3");
  std::unordered_map<std::string, long long> counts;
  for (const auto* corpus : {&translations, &comments})
    for (const auto& doc : *corpus)
      for (const auto& token : doc) ++counts[token];
  if (counts.empty()) throw EmptyCorpus();

  std::vector<std::pair<std::string, long long>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.words = {Vocabulary::kPadWord, Vocabulary::kUnkWord};
  const std::size_t keep = static_cast<std::size_t>(n - 2);
  for (std::size_t i = 0; i < ranked.size() && i < keep; ++i)
    vocab.words.push_back(ranked[i].first);
  for (int id = 0; id < vocab.size(); ++id) vocab.ids.emplace(vocab.words[id], id);
  return vocab;
}

std::vector<int> map_tokens(const Vocabulary& vocab, const TokenSeq& tokens) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) ids.push_back(vocab.id_of(token));
  return ids;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileUnreadable(path);
  for (const auto& word : vocab.words) out << word << '\n';
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  Vocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.words.push_back(line);
  }
  if (vocab.words.size() < 2 || vocab.words[0] != Vocabulary::kPadWord ||
      vocab.words[1] != Vocabulary::kUnkWord)
    throw CorruptFile(path);
  for (int id = 0; id < vocab.size(); ++id) vocab.ids.emplace(vocab.words[id], id);
  return vocab;
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a64(buf.str());
}

}  // namespace transearch
