// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Driver for the external compile/disassemble toolchain. Results are cached
// by content hash so a corpus re-run never re-invokes the tools.
#pragma once

#include <cstdlib>
#include <string>

namespace transearch {

struct ToolConfig {
  std::string compiler;      // e.g. "javac"
  std::string disassembler;  // e.g. "javap"

  /// Defaults come from TRANSEARCH_JAVAC / TRANSEARCH_JAVAP when set.
  static ToolConfig from_env() {
    ToolConfig cfg;
    const char* javac = std::getenv("TRANSEARCH_JAVAC");
    const char* javap = std::getenv("TRANSEARCH_JAVAP");
    cfg.compiler = javac != nullptr ? javac : "javac";
    cfg.disassembler = javap != nullptr ? javap : "javap";
    return cfg;
  }
};

/// Compiles `code` (wrapped in a synthetic class when it is a bare method)
/// and returns the disassembler's text. Cached under
/// work_dir/cache/<content-hash>.disasm. Throws CompileFailed with the
/// compiler diagnostics and ToolMissing when a tool cannot be run.
std::string disassemble_external(const std::string& code, const std::string& work_dir,
                                 const ToolConfig& tools);

}  // namespace transearch
