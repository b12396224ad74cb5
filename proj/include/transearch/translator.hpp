// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Turns a parsed method into ordered natural-language sentences by
// simulating instruction execution over a symbolic operand stack and the
// local-variable table, filling each opcode's template with the collected
// context, and recording the induced data/control dependency graph.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "transearch/disasm.hpp"
#include "transearch/ruleset.hpp"

namespace transearch {

/// Rendered content of one operand-stack cell: a constant literal, a
/// variable name, or the generic token "value" for computed results.
struct SymbolicValue {
  std::string text;
  int producer_index = -1;  // instruction index that pushed it
};

struct SimState {
  std::vector<SymbolicValue> stack;
  int max_stack = 0;  // 0 = undeclared, no overflow checking
};

struct InstructionDependencyGraph {
  std::vector<int> nodes;                            // ascending instruction indices
  std::vector<std::pair<int, int>> data_edges;       // consumer -> producer
  std::vector<std::pair<int, int>> control_edges;    // branch -> target
};

struct Translation {
  std::string method_id;
  std::vector<std::pair<int, std::string>> sentences;  // (instruction index, sentence)
  InstructionDependencyGraph dependency_graph;
};

/// Single top-to-bottom pass over the instruction sequence. Throws
/// UnknownOpcode for a mnemonic without a rule and StackOverflowSim when a
/// push would exceed a declared max_stack. Stack underflow never fails: each
/// missing value is absorbed as the sentinel "value" with no data edge.
/// `final_state`, when given, receives the simulated stack after the pass.
Translation translate_method(const MethodDisassembly& md, const RuleSet& rs,
                             SimState* final_state = nullptr);

/// Pops the values a rule consumes (fixed count, call-descriptor arity plus
/// receiver for instance calls, or a dimension-operand count), top of stack
/// first. Only meaningful for the popping categories PO, POU and SV.
std::vector<SymbolicValue> pop_for(const TranslationRule& rule, const Instruction& instr,
                                   SimState& state);

/// The value a pop-operate-push instruction leaves on the stack: the generic
/// token "value" produced at the instruction's own index. Throws
/// std::invalid_argument for non-POU rules.
SymbolicValue render_result(const TranslationRule& rule, const std::vector<SymbolicValue>& popped,
                            const Instruction& instr);

enum class GraphFormat { kDot, kJson };

/// Deterministic serialization; dot output draws data edges solid and
/// control edges dashed, nodes labeled by instruction index.
std::string export_graph(const Translation& translation, GraphFormat format);

/// All sentences joined into one line, separated by " . " (the embedding
/// pipeline's sentence-boundary form).
std::string sentence_stream(const Translation& translation);

}  // namespace transearch
