// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/corpus.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "transearch/errors.hpp"

namespace transearch {

CorpusReadResult read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);

  CorpusReadResult result;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("code") || !j.contains("docstring") ||
        !j["code"].is_string() || !j["docstring"].is_string() ||
        j["docstring"].get_ref<const std::string&>().empty()) {
      ++result.skipped;
      continue;
    }
    CorpusRecord record;
    record.code = j["code"].get<std::string>();
    record.comment = j["docstring"].get<std::string>();
    if (j.contains("id") && j["id"].is_string()) {
      record.id = j["id"].get<std::string>();
    } else {
      std::ostringstream id;
      id << "line" << std::setw(8) << std::setfill('0') << line_no;
      record.id = id.str();
    }
    if (j.contains("disassembly") && j["disassembly"].is_string())
      record.disassembly = j["disassembly"].get<std::string>();
    result.records.push_back(std::move(record));
  }
  if (result.records.empty()) throw NoValidRecords(path);
  return result;
}

}  // namespace transearch
