// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-opcode translation rules: an English template with context
// placeholders plus the six-way classification of how the opcode interacts
// with the operand stack and the local-variable array.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace transearch {

// PU  push-only          (pushes its operand onto the stack)
// PO  pop-only           (consumes stack values)
// POU pop-operate-push   (consumes values, pushes one result)
// V   variable-only      (touches the local-variable array, not the stack)
// SV  stack-and-variable (both; loads push, stores pop)
// O   neither
enum class Category { PU, PO, POU, V, SV, O };

std::string to_string(Category c);
Category category_from_string(const std::string& s);  // throws RuleParseError(0,...) on bad input

// Template placeholders: [pc] constant, [pv] variable name, [ps] popped
// stack value, [pi] branch-target instruction index.
struct TranslationRule {
  std::string opcode;
  Category category = Category::O;
  std::string template_text;

  int pop_count = 0;                   // ignored when a flag below is set
  bool pops_by_descriptor = false;     // invoke family: arity from the call descriptor
  bool pops_by_dimension_operand = false;  // pops given by the last operand

  int push_count = 0;                  // 0 or 1
  std::vector<int> push_indices;       // dup family: popped values re-pushed, by pop position
};

struct RuleSet {
  std::map<std::string, TranslationRule> rules;

  const TranslationRule* find(const std::string& opcode) const {
    auto it = rules.find(opcode);
    return it == rules.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return rules.size(); }
};

/// Parses rule-file text: one record per opcode, '|'-delimited columns
/// (mnemonic | category | template | pop spec | push spec), '#' comments.
/// Throws DuplicateOpcode, BadPlaceholder, CategoryMismatch, RuleParseError.
RuleSet load_rules(const std::string& source_text);
RuleSet load_rules_file(const std::string& path);  // + FileUnreadable

/// Category lookup; throws UnknownOpcode.
Category category_of(const RuleSet& rs, const std::string& opcode);

struct ValidationReport {
  std::vector<std::string> missing;     // reference opcodes absent from the rule set
  std::vector<std::string> violations;  // placeholder/category/pop/push inconsistencies
  std::vector<std::string> partial;     // informational: opcodes with partial rendering
  bool ok() const { return missing.empty() && violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_ruleset(const RuleSet& rs);

/// The reference instruction enumeration the default rule set must cover, as
/// base mnemonics (fused-suffix and <cond>/<op> families expanded), with the
/// category each one belongs to.
const std::map<std::string, Category>& reference_categories();

}  // namespace transearch
