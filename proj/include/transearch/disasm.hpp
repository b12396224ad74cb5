// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Parser for the textual output of a class-file disassembler (javap -c -l
// style). Produces one MethodDisassembly per method body: the instruction
// sequence, the local-variable table when the class was compiled with debug
// info, and the declared operand-stack / local-array sizes.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace transearch {

struct Instruction {
  int index = 0;                   // byte offset, as printed at line start
  std::string opcode;              // base mnemonic, fused suffix already split off
  std::vector<long long> operands; // fused operand (if any) first
  std::string descriptor_comment;  // trailing "// ..." text, verbatim; empty if absent
};

struct LocalVariableEntry {
  int start = 0;
  int length = 0;
  int slot = 0;
  std::string name;
  std::string signature;
};

struct MethodDisassembly {
  std::string method_id;
  std::vector<Instruction> instructions;
  std::vector<LocalVariableEntry> variable_table;
  int max_stack = 0;   // 0 when the header carried no "stack=" value
  int max_locals = 0;  // 0 when undeclared
};

/// Parses a full disassembler dump into one entry per method body.
///
/// Accepts two input shapes: the structured form (method signature lines,
/// "Code:" sections, optional LocalVariableTable blocks) and a bare fragment
/// consisting only of numbered instruction lines, which is returned as a
/// single anonymous method. An empty input yields an empty list.
///
/// Throws MalformedLine for an instruction-shaped line that does not parse,
/// and MissingCode for a method signature with no Code: section.
std::vector<MethodDisassembly> parse_disassembly(const std::string& text);

/// Returns the table entry whose slot matches and whose [start, start+length)
/// scope covers at_index; with nested scopes the one with the greatest start
/// wins. Throws UnknownSlot when nothing covers the position.
const LocalVariableEntry& resolve_variable(const MethodDisassembly& md, int slot, int at_index);

/// Splits a fused-suffix mnemonic: "istore_2" -> ("istore", 2),
/// "iconst_m1" -> ("iconst", -1). Mnemonics without a numeric suffix pass
/// through unchanged ("goto", "dup_x1", "ldc2_w").
std::pair<std::string, std::optional<long long>> split_fused_operand(const std::string& opcode_text);

}  // namespace transearch
