// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/translator.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "transearch/errors.hpp"

namespace transearch {
namespace {

constexpr const char* kGenericValue = "value";

std::string trim(std::string s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

// Simple name from a symbolic member reference:
// "java/util/Collections.swap:(Ljava/util/List;II)V" -> "swap".
std::string simple_member_name(std::string ref) {
  const auto paren = ref.find(":(");
  if (paren != std::string::npos) ref = ref.substr(0, paren);
  const auto colon = ref.rfind(':');
  if (colon != std::string::npos && ref.find('(') == std::string::npos) ref = ref.substr(0, colon);
  const auto cut = ref.find_last_of("./:");
  if (cut != std::string::npos) ref = ref.substr(cut + 1);
  std::erase(ref, '"');
  if (!ref.empty() && ref.front() == '#') ref.erase(ref.begin());
  return ref;
}

std::string simple_class_name(std::string ref) {
  std::erase(ref, '"');
  const auto slash = ref.find_last_of('/');
  if (slash != std::string::npos) ref = ref.substr(slash + 1);
  while (!ref.empty() && ref.front() == '[') ref.erase(ref.begin());
  if (ref.size() >= 2 && ref.front() == 'L' && ref.back() == ';')
    ref = ref.substr(1, ref.size() - 2);
  if (!ref.empty() && ref.back() == ';') ref.pop_back();
  return ref;
}

std::string join_operands(const Instruction& instr, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < instr.operands.size(); ++i) {
    if (!out.empty()) out += ", ";
    out += std::to_string(instr.operands[i]);
  }
  return out;
}

// Rendering of the [pc] placeholder: a symbolic name parsed from the
// descriptor comment when one is printed, otherwise the literal operands.
std::string constant_text(const TranslationRule& rule, const Instruction& instr) {
  const std::string& comment = instr.descriptor_comment;
  if (!comment.empty()) {
    if (starts_with(rule.opcode, "invoke")) {
      std::string body = comment;
      for (const char* tag : {"InterfaceMethod ", "Method ", "InvokeDynamic ", "Dynamic "}) {
        if (starts_with(body, tag)) {
          body = body.substr(std::string(tag).size());
          break;
        }
      }
      return simple_member_name(trim(body));
    }
    if (starts_with(comment, "Field ")) return simple_member_name(trim(comment.substr(6)));
    if (starts_with(comment, "class ")) return simple_class_name(trim(comment.substr(6)));
    if (starts_with(rule.opcode, "ldc")) {
      const auto space = comment.find(' ');
      if (space != std::string::npos) return trim(comment.substr(space + 1));
      return comment;
    }
    return comment;
  }
  if (rule.opcode == "aconst_null") return "null";
  if (rule.opcode == "jsr" || rule.opcode == "jsr_w") return "address";
  // [pv] consumes the leading slot operand for variable rules
  const bool has_pv = rule.template_text.find("[pv]") != std::string::npos;
  const std::string text = join_operands(instr, has_pv ? 1 : 0);
  if (!text.empty()) return text;
  return "constant";
}

// Variable name for the slot an instruction addresses. A store's scope opens
// just past the store itself, so the lookup falls back to the next scope
// opening for the slot, and finally to a synthetic name for tables stripped
// of debug info.
std::string variable_name(const MethodDisassembly& md, int slot, int at_index) {
  const LocalVariableEntry* covering = nullptr;
  const LocalVariableEntry* upcoming = nullptr;
  for (const auto& entry : md.variable_table) {
    if (entry.slot != slot) continue;
    if (at_index >= entry.start && at_index < entry.start + entry.length) {
      if (covering == nullptr || entry.start > covering->start) covering = &entry;
    } else if (entry.start > at_index) {
      if (upcoming == nullptr || entry.start < upcoming->start) upcoming = &entry;
    }
  }
  if (covering != nullptr) return covering->name;
  if (upcoming != nullptr) return upcoming->name;
  return "var" + std::to_string(slot);
}

// Parameter count encoded in "(...)" of a method descriptor, or -1 when no
// descriptor is present.
int descriptor_param_count(const std::string& comment) {
  const auto open = comment.find('(');
  const auto close = comment.find(')', open == std::string::npos ? 0 : open);
  if (open == std::string::npos || close == std::string::npos) return -1;
  int count = 0;
  std::size_t i = open + 1;
  while (i < close) {
    while (i < close && comment[i] == '[') ++i;
    if (i >= close) break;
    if (comment[i] == 'L') {
      const auto semi = comment.find(';', i);
      if (semi == std::string::npos || semi > close) return -1;
      i = semi + 1;
    } else {
      ++i;
    }
    ++count;
  }
  return count;
}

int call_pop_count(const TranslationRule& rule, const Instruction& instr) {
  const int params = descriptor_param_count(instr.descriptor_comment);
  if (params < 0) return 0;  // no descriptor printed: pop nothing
  const bool has_receiver =
      rule.opcode != "invokestatic" && rule.opcode != "invokedynamic";
  return params + (has_receiver ? 1 : 0);
}

std::string fill_template(const std::string& tmpl, const std::string& pc, const std::string& pv,
                          const std::string& pi, const std::vector<SymbolicValue>& popped) {
  // count [ps] occurrences to decide positional vs joined fill
  int ps_slots = 0;
  for (std::size_t i = tmpl.find("[ps]"); i != std::string::npos; i = tmpl.find("[ps]", i + 4))
    ++ps_slots;
  const bool positional = ps_slots == static_cast<int>(popped.size()) && ps_slots > 0;
  std::string joined;
  if (!positional) {
    for (const auto& value : popped) {
      if (!joined.empty()) joined += ", ";
      joined += value.text;
    }
    if (joined.empty()) joined = kGenericValue;
  }

  std::string out;
  out.reserve(tmpl.size() + 16);
  std::size_t ps_used = 0;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '[') {
      const std::string_view rest = std::string_view(tmpl).substr(i);
      if (rest.rfind("[pc]", 0) == 0) { out += pc; i += 4; continue; }
      if (rest.rfind("[pv]", 0) == 0) { out += pv; i += 4; continue; }
      if (rest.rfind("[pi]", 0) == 0) { out += pi; i += 4; continue; }
      if (rest.rfind("[ps]", 0) == 0) {
        out += positional ? popped[ps_used++].text : joined;
        i += 4;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

void push_value(SimState& state, SymbolicValue value, int at_index) {
  if (state.max_stack > 0 && static_cast<int>(state.stack.size()) >= state.max_stack)
    throw StackOverflowSim(at_index, state.max_stack);
  state.stack.push_back(std::move(value));
}

}  // namespace

std::vector<SymbolicValue> pop_for(const TranslationRule& rule, const Instruction& instr,
                                   SimState& state) {
  int count = rule.pop_count;
  if (rule.pops_by_descriptor) {
    count = call_pop_count(rule, instr);
  } else if (rule.pops_by_dimension_operand) {
    count = instr.operands.empty() ? 0 : static_cast<int>(std::max<long long>(
                                             0, instr.operands.back()));
  }
  std::vector<SymbolicValue> popped;
  popped.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (!state.stack.empty()) {
      popped.push_back(std::move(state.stack.back()));
      state.stack.pop_back();
    } else {
      // underflow: absorbed with a self-produced sentinel, no data edge
      popped.push_back(SymbolicValue{kGenericValue, instr.index});
    }
  }
  return popped;
}

SymbolicValue render_result(const TranslationRule& rule, const std::vector<SymbolicValue>&,
                            const Instruction& instr) {
  if (rule.category != Category::POU)
    throw std::invalid_argument("render_result requires a pop-operate-push rule");
  return SymbolicValue{kGenericValue, instr.index};
}

Translation translate_method(const MethodDisassembly& md, const RuleSet& rs,
                             SimState* final_state) {
  Translation out;
  out.method_id = md.method_id;
  out.sentences.reserve(md.instructions.size());

  std::set<int> known_indices;
  for (const auto& instr : md.instructions) known_indices.insert(instr.index);
  out.dependency_graph.nodes.assign(known_indices.begin(), known_indices.end());

  SimState state;
  state.max_stack = md.max_stack;

  std::set<std::pair<int, int>> data_edges;
  std::set<std::pair<int, int>> control_edges;

  for (const auto& instr : md.instructions) {
    const TranslationRule* rule = rs.find(instr.opcode);
    if (rule == nullptr) throw UnknownOpcode(instr.opcode);

    std::vector<SymbolicValue> popped;
    const bool pops = rule->category == Category::PO || rule->category == Category::POU ||
                      rule->category == Category::SV;
    if (pops) {
      popped = pop_for(*rule, instr, state);
      for (const auto& value : popped) {
        if (value.producer_index != instr.index)
          data_edges.emplace(instr.index, value.producer_index);
      }
    }

    std::string pc_text, pv_text, pi_text;
    if (rule->template_text.find("[pc]") != std::string::npos)
      pc_text = constant_text(*rule, instr);
    if (rule->template_text.find("[pv]") != std::string::npos) {
      const int slot = instr.operands.empty() ? -1 : static_cast<int>(instr.operands.front());
      pv_text = slot < 0 ? "var" : variable_name(md, slot, instr.index);
    }
    if (rule->template_text.find("[pi]") != std::string::npos && !instr.operands.empty()) {
      const int target = static_cast<int>(instr.operands.back());
      pi_text = std::to_string(target);
      if (known_indices.count(target)) control_edges.emplace(instr.index, target);
    }

    out.sentences.emplace_back(
        instr.index, fill_template(rule->template_text, pc_text, pv_text, pi_text, popped));

    switch (rule->category) {
      case Category::PU:
        push_value(state, SymbolicValue{constant_text(*rule, instr), instr.index}, instr.index);
        break;
      case Category::POU:
        if (!rule->push_indices.empty()) {
          // dup family: re-push popped values, keeping their original producers
          for (int idx : rule->push_indices) {
            if (idx >= 0 && idx < static_cast<int>(popped.size()))
              push_value(state, popped[static_cast<std::size_t>(idx)], instr.index);
          }
        } else {
          push_value(state, render_result(*rule, popped, instr), instr.index);
        }
        break;
      case Category::SV:
        if (rule->push_count == 1)
          push_value(state, SymbolicValue{pv_text.empty() ? kGenericValue : pv_text, instr.index},
                     instr.index);
        break;
      case Category::PO:
      case Category::V:
      case Category::O:
        break;
    }
  }

  out.dependency_graph.data_edges.assign(data_edges.begin(), data_edges.end());
  out.dependency_graph.control_edges.assign(control_edges.begin(), control_edges.end());
  if (final_state != nullptr) *final_state = std::move(state);
  return out;
}

std::string export_graph(const Translation& translation, GraphFormat format) {
  const InstructionDependencyGraph& graph = translation.dependency_graph;
  if (format == GraphFormat::kJson) {
    nlohmann::json j;
    j["nodes"] = graph.nodes;
    j["data_edges"] = graph.data_edges;
    j["control_edges"] = graph.control_edges;
    return j.dump();
  }
  std::ostringstream out;
  out << "digraph dependencies {\n";
  for (int node : graph.nodes) out << "  " << node << ";\n";
  for (const auto& [from, to] : graph.data_edges) out << "  " << from << " -> " << to << ";\n";
  for (const auto& [from, to] : graph.control_edges)
    out << "  " << from << " -> " << to << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

std::string sentence_stream(const Translation& translation) {
  std::string out;
  for (const auto& [index, sentence] : translation.sentences) {
    if (!out.empty()) out += " . ";
    out += sentence;
  }
  return out;
}

}  // namespace transearch
