// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/disasm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "transearch/errors.hpp"

namespace transearch {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

enum class LineMatch { kNoMatch, kInstruction, kBroken };

// "   7: if_icmpge     22" -> (7, "if_icmpge", "22"). A line with the
// "<digits>:" prefix whose body is not a mnemonic is reported as broken.
LineMatch match_instruction_line(std::string_view line, long long& index, std::string& mnemonic,
                                 std::string& rest) {
  std::string_view s = trim(line);
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || i >= s.size() || s[i] != ':') return LineMatch::kNoMatch;
  if (!parse_int(s.substr(0, i), index)) return LineMatch::kNoMatch;
  std::string_view tail = trim(s.substr(i + 1));
  if (tail.empty()) return LineMatch::kBroken;
  std::size_t j = 0;
  while (j < tail.size() && !std::isspace(static_cast<unsigned char>(tail[j]))) ++j;
  mnemonic.assign(tail.substr(0, j));
  rest.assign(trim(tail.substr(j)));
  // a mnemonic starts with a letter; "1: 36" inside a switch block does not
  if (mnemonic.empty() || !std::isalpha(static_cast<unsigned char>(mnemonic.front())))
    return LineMatch::kBroken;
  return LineMatch::kInstruction;
}

// Method signature as printed by the disassembler: contains a parameter list
// and ends with ';' (e.g. "int calArraySum(int[]);" or "CalArraySum();").
bool looks_like_signature(std::string_view line) {
  std::string_view s = trim(line);
  if (s.size() < 4 || s.back() != ';') return false;
  if (s.find('(') == std::string_view::npos || s.find(')') == std::string_view::npos)
    return false;
  // Instruction comments never reach here (instruction lines are tested
  // first); local-variable rows contain no '('.
  return std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_' ||
         s.front() == '<' || s.front() == '$';
}

bool is_section_header(std::string_view trimmed, std::string_view name) {
  return trimmed == name;
}

// "    2      22     2   sum   I"
bool match_lvt_row(std::string_view line, LocalVariableEntry& entry) {
  std::istringstream in{std::string(trim(line))};
  long long start = 0, length = 0, slot = 0;
  std::string name, signature, extra;
  if (!(in >> start >> length >> slot >> name >> signature)) return false;
  if (in >> extra) return false;
  if (name.empty()) return false;
  entry.start = static_cast<int>(start);
  entry.length = static_cast<int>(length);
  entry.slot = static_cast<int>(slot);
  entry.name = std::move(name);
  entry.signature = std::move(signature);
  return true;
}

// Splits "stack=3, locals=4, args_size=2".
void parse_frame_header(std::string_view s, MethodDisassembly& md) {
  auto read_field = [&](std::string_view key) -> int {
    const auto pos = s.find(key);
    if (pos == std::string_view::npos) return 0;
    long long v = 0;
    std::size_t i = pos + key.size();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (!parse_int(s.substr(i, j - i), v)) return 0;
    return static_cast<int>(v);
  };
  md.max_stack = read_field("stack=");
  md.max_locals = read_field("locals=");
}

// Parses the operand text of one instruction line. Integer tokens (with or
// without a leading '#') become operands; a "// ..." tail becomes the
// descriptor comment; a bare word operand (e.g. "newarray int") is stored in
// the comment slot when that slot is free so it can still be rendered.
void parse_operands(std::string_view rest, Instruction& instr, int line_no,
                    const std::string& line) {
  const auto slash = rest.find("//");
  if (slash != std::string_view::npos) {
    instr.descriptor_comment = std::string(trim(rest.substr(slash + 2)));
    rest = trim(rest.substr(0, slash));
  }
  std::string word;
  std::istringstream in{std::string(rest)};
  while (in >> word) {
    while (!word.empty() && word.back() == ',') word.pop_back();
    if (word.empty()) continue;
    std::string_view w = word;
    if (w.front() == '#') w.remove_prefix(1);
    long long value = 0;
    if (parse_int(w, value)) {
      instr.operands.push_back(value);
    } else if (word == "{") {
      // switch blocks are handled by the caller
      throw MalformedLine(line_no, line);
    } else if (instr.descriptor_comment.empty()) {
      instr.descriptor_comment = word;
    }
    // further word operands are ignored
  }
}

struct Parser {
  explicit Parser(const std::string& text) { split_lines(text); }

  void split_lines(const std::string& text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        if (pos < text.size()) lines.push_back(text.substr(pos));
        break;
      }
      std::string line = text.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      pos = nl + 1;
    }
  }

  std::vector<MethodDisassembly> run() {
    while (cursor < lines.size()) {
      const std::string& line = lines[cursor];
      const std::string_view trimmed = trim(line);
      ++cursor;
      if (trimmed.empty()) continue;
      if (trimmed == "}") {
        finalize_pending();
        continue;
      }

      long long index = 0;
      std::string mnemonic, rest;
      const LineMatch match = match_instruction_line(line, index, mnemonic, rest);
      if (match != LineMatch::kNoMatch) {
        if (method_open && mode == Mode::kSkipSection) continue;
        if (match == LineMatch::kBroken) throw MalformedLine(static_cast<int>(cursor), line);
        handle_instruction(index, mnemonic, rest, static_cast<int>(cursor), line);
        continue;
      }
      if (is_section_header(trimmed, "Code:")) {
        open_code_section();
        continue;
      }
      if (is_section_header(trimmed, "LocalVariableTable:")) {
        mode = Mode::kVariableTable;
        continue;
      }
      if (trimmed.back() == ':' && trimmed.find(' ') == std::string_view::npos) {
        mode = Mode::kSkipSection;  // LineNumberTable:, StackMapTable:, ...
        continue;
      }
      if (trimmed.rfind("Exception table", 0) == 0) {
        mode = Mode::kSkipSection;
        continue;
      }
      if (mode == Mode::kVariableTable) {
        LocalVariableEntry entry;
        if (trimmed.rfind("Start ", 0) == 0) continue;  // column header
        if (match_lvt_row(line, entry)) {
          if (method_open) current.variable_table.push_back(entry);
          continue;
        }
        mode = Mode::kBody;  // fall through and reclassify
      }
      if (looks_like_signature(line)) {
        finalize_pending();
        std::string_view sig = trimmed;
        sig.remove_suffix(1);  // drop ';'
        pending_signature = std::string(trim(sig));
        have_pending_signature = true;
        continue;
      }
      // anything else (class header, "Compiled from", skipped sections) is ignored
    }
    finalize_pending();
    if (methods.empty() && !fragment.instructions.empty()) {
      fragment.method_id = "<fragment>";
      methods.push_back(std::move(fragment));
    }
    return std::move(methods);
  }

 private:
  enum class Mode { kBody, kVariableTable, kSkipSection };

  void open_code_section() {
    if (method_open) finalize_method();
    current = MethodDisassembly{};
    current.method_id = have_pending_signature ? pending_signature : "<anonymous>";
    have_pending_signature = false;
    method_open = true;
    in_code = true;
    mode = Mode::kBody;
    // the "stack=, locals=" frame line follows immediately
    if (cursor < lines.size()) {
      const std::string_view next = trim(lines[cursor]);
      if (next.find("stack=") != std::string_view::npos ||
          next.find("locals=") != std::string_view::npos) {
        parse_frame_header(next, current);
        ++cursor;
      }
    }
  }

  void handle_instruction(long long index, const std::string& mnemonic, std::string rest,
                          int line_no, const std::string& line) {
    if (!method_open) {
      append_instruction(fragment, index, mnemonic, rest, line_no, line);
      return;
    }
    if (!in_code || mode == Mode::kSkipSection) return;
    mode = Mode::kBody;
    append_instruction(current, index, mnemonic, rest, line_no, line);
  }

  void append_instruction(MethodDisassembly& md, long long index, const std::string& mnemonic,
                          std::string rest, int line_no, const std::string& line) {
    Instruction instr;
    instr.index = static_cast<int>(index);
    auto [base, fused] = split_fused_operand(mnemonic);
    instr.opcode = std::move(base);
    if (fused) instr.operands.push_back(*fused);

    const bool is_switch = instr.opcode == "tableswitch" || instr.opcode == "lookupswitch";
    if (is_switch) {
      consume_switch_block(rest, instr);
    } else {
      parse_operands(rest, instr, line_no, line);
    }
    if (!md.instructions.empty() && md.instructions.back().index >= instr.index)
      throw MalformedLine(line_no, line);
    md.instructions.push_back(std::move(instr));
  }

  // A switch prints its targets in a braced block; only the default target is
  // kept as the operand.
  void consume_switch_block(std::string_view first_rest, Instruction& instr) {
    const auto slash = first_rest.find("//");
    if (slash != std::string_view::npos) {
      instr.descriptor_comment = std::string(trim(first_rest.substr(slash + 2)));
    }
    long long default_target = 0;
    bool have_default = false;
    while (cursor < lines.size()) {
      const std::string_view row = trim(lines[cursor]);
      ++cursor;
      if (row == "}") break;
      const auto colon = row.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(row.substr(0, colon));
      long long target = 0;
      if (key == "default" && parse_int(trim(row.substr(colon + 1)), target)) {
        default_target = target;
        have_default = true;
      }
    }
    if (have_default) instr.operands.push_back(default_target);
  }

  void finalize_method() {
    methods.push_back(std::move(current));
    current = MethodDisassembly{};
    method_open = false;
    in_code = false;
    mode = Mode::kBody;
  }

  void finalize_pending() {
    if (method_open) finalize_method();
    if (have_pending_signature) {
      have_pending_signature = false;
      throw MissingCode(pending_signature);
    }
  }

  std::vector<std::string> lines;
  std::size_t cursor = 0;
  std::vector<MethodDisassembly> methods;
  MethodDisassembly current;
  MethodDisassembly fragment;  // bare instruction lines with no surrounding method
  std::string pending_signature;
  bool have_pending_signature = false;
  bool method_open = false;
  bool in_code = false;
  Mode mode = Mode::kBody;
};

}  // namespace

std::vector<MethodDisassembly> parse_disassembly(const std::string& text) {
  return Parser(text).run();
}

const LocalVariableEntry& resolve_variable(const MethodDisassembly& md, int slot, int at_index) {
  const LocalVariableEntry* best = nullptr;
  for (const auto& entry : md.variable_table) {
    if (entry.slot != slot) continue;
    if (at_index < entry.start || at_index >= entry.start + entry.length) continue;
    if (best == nullptr || entry.start > best->start) best = &entry;
  }
  if (best == nullptr) throw UnknownSlot(slot, at_index);
  return *best;
}

std::pair<std::string, std::optional<long long>> split_fused_operand(
    const std::string& opcode_text) {
  const auto underscore = opcode_text.rfind('_');
  if (underscore == std::string::npos || underscore + 1 >= opcode_text.size())
    return {opcode_text, std::nullopt};
  const std::string_view suffix = std::string_view(opcode_text).substr(underscore + 1);
  if (suffix == "m1") return {opcode_text.substr(0, underscore), -1};
  if (all_digits(suffix)) {
    long long value = 0;
    parse_int(suffix, value);
    return {opcode_text.substr(0, underscore), value};
  }
  return {opcode_text, std::nullopt};
}

}  // namespace transearch
