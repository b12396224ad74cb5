// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace transearch {

struct CorpusRecord {
  std::string id;
  std::string code;         // raw source
  std::string comment;      // docstring
  std::string disassembly;  // pre-generated disassembler text, may be empty
};

struct CorpusReadResult {
  std::vector<CorpusRecord> records;
  int skipped = 0;  // lines lacking required fields or unparseable
};

/// Reads a JSONL corpus: one object per line with "code" and "docstring"
/// fields, optional "id" and "disassembly". Lines missing required fields
/// are skipped and counted. Throws FileUnreadable and NoValidRecords.
CorpusReadResult read_corpus(const std::string& path);

}  // namespace transearch
