// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/ruleset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "transearch/errors.hpp"

namespace transearch {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct PlaceholderCounts {
  int pc = 0, pv = 0, ps = 0, pi = 0;
};

// Counts placeholder occurrences; reports malformed or unknown bracket tokens.
bool scan_placeholders(const std::string& tmpl, PlaceholderCounts& counts, std::string& problem) {
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '[') continue;
    const auto close = tmpl.find(']', i);
    if (close == std::string::npos) {
      problem = "unclosed '[' in template";
      return false;
    }
    const std::string token = tmpl.substr(i + 1, close - i - 1);
    if (token == "pc") ++counts.pc;
    else if (token == "pv") ++counts.pv;
    else if (token == "ps") ++counts.ps;
    else if (token == "pi") ++counts.pi;
    else {
      problem = "unknown placeholder [" + token + "]";
      return false;
    }
    i = close;
  }
  return true;
}

bool is_branch_opcode(const std::string& op) {
  static const std::array<const char*, 22> branches = {
      "goto",      "goto_w",     "jsr",       "jsr_w",     "ifeq",       "ifne",
      "iflt",      "ifge",       "ifgt",      "ifle",      "ifnull",     "ifnonnull",
      "if_icmpeq", "if_icmpne",  "if_icmplt", "if_icmpge", "if_icmpgt",  "if_icmple",
      "if_acmpeq", "if_acmpne",  "tableswitch", "lookupswitch"};
  return std::any_of(branches.begin(), branches.end(),
                     [&](const char* b) { return op == b; });
}

// One string describing why a rule is inconsistent, or empty when it is fine.
std::string check_rule(const TranslationRule& rule) {
  PlaceholderCounts counts;
  std::string problem;
  if (!scan_placeholders(rule.template_text, counts, problem)) return problem;

  const Category cat = rule.category;
  const bool pops = cat == Category::PO || cat == Category::POU || cat == Category::SV;
  if (counts.ps > 0 && !pops) return "[ps] is only valid for stack-popping categories";
  if (counts.pv > 0 && cat != Category::V && cat != Category::SV)
    return "[pv] is only valid for variable categories";
  if (counts.pi > 0 && cat != Category::PU && cat != Category::PO && cat != Category::O)
    return "[pi] is only valid for branch-capable categories";

  if (!pops && (rule.pop_count != 0 || rule.pops_by_descriptor || rule.pops_by_dimension_operand))
    return "pop count must be 0 for categories PU, V and O";
  if (counts.ps > 0 && !rule.pops_by_descriptor && !rule.pops_by_dimension_operand &&
      rule.pop_count == 0)
    return "template uses [ps] but the rule pops nothing";

  const int pushes = rule.push_indices.empty()
                         ? rule.push_count
                         : static_cast<int>(rule.push_indices.size());
  switch (cat) {
    case Category::PU:
      if (pushes != 1) return "push-only rules must push exactly one value";
      break;
    case Category::PO:
    case Category::V:
    case Category::O:
      if (pushes != 0) return "rule category forbids pushing";
      break;
    case Category::POU:
      if (rule.push_indices.empty() && rule.push_count != 1)
        return "pop-operate-push rules must push a result";
      break;
    case Category::SV:
      if (pushes != 0 && pushes != 1) return "stack-and-variable rules push at most one value";
      if (!rule.push_indices.empty()) return "re-push patterns are reserved for the dup family";
      break;
  }
  for (int idx : rule.push_indices) {
    if (idx < 0 || idx >= rule.pop_count) return "re-push index out of popped range";
  }
  if (is_branch_opcode(rule.opcode) && counts.pi == 0)
    return "branch opcode template must carry a [pi] jump target";
  return {};
}

}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::PU: return "PU";
    case Category::PO: return "PO";
    case Category::POU: return "POU";
    case Category::V: return "V";
    case Category::SV: return "SV";
    case Category::O: return "O";
  }
  return "?";
}

Category category_from_string(const std::string& s) {
  if (s == "PU") return Category::PU;
  if (s == "PO") return Category::PO;
  if (s == "POU") return Category::POU;
  if (s == "V") return Category::V;
  if (s == "SV") return Category::SV;
  if (s == "O") return Category::O;
  throw RuleParseError(0, "unknown category: " + s);
}

RuleSet load_rules(const std::string& source_text) {
  RuleSet rs;
  std::istringstream in(source_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      const auto bar = stripped.find('|', pos);
      if (bar == std::string::npos) {
        cols.push_back(trim(stripped.substr(pos)));
        break;
      }
      cols.push_back(trim(stripped.substr(pos, bar - pos)));
      pos = bar + 1;
    }
    if (cols.size() != 5) throw RuleParseError(line_no, "expected 5 columns, got " +
                                                            std::to_string(cols.size()));
    TranslationRule rule;
    rule.opcode = cols[0];
    if (rule.opcode.empty()) throw RuleParseError(line_no, "empty mnemonic");
    try {
      rule.category = category_from_string(cols[1]);
    } catch (const RuleParseError&) {
      throw RuleParseError(line_no, "unknown category: " + cols[1]);
    }
    rule.template_text = cols[2];

    const std::string& pop_spec = cols[3];
    if (pop_spec.rfind("pop ", 0) != 0) throw RuleParseError(line_no, "bad pop spec: " + pop_spec);
    const std::string pop_arg = trim(pop_spec.substr(4));
    if (pop_arg == "D") {
      rule.pops_by_descriptor = true;
    } else if (pop_arg == "dims") {
      rule.pops_by_dimension_operand = true;
    } else {
      try {
        rule.pop_count = std::stoi(pop_arg);
      } catch (...) {
        throw RuleParseError(line_no, "bad pop spec: " + pop_spec);
      }
      if (rule.pop_count < 0) throw RuleParseError(line_no, "negative pop count");
    }

    const std::string& push_spec = cols[4];
    if (push_spec.rfind("push ", 0) != 0)
      throw RuleParseError(line_no, "bad push spec: " + push_spec);
    const std::string push_arg = trim(push_spec.substr(5));
    if (!push_arg.empty() && push_arg[0] == '$') {
      std::istringstream items(push_arg);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty() || item[0] != '$')
          throw RuleParseError(line_no, "bad push pattern: " + push_spec);
        try {
          rule.push_indices.push_back(std::stoi(item.substr(1)));
        } catch (...) {
          throw RuleParseError(line_no, "bad push pattern: " + push_spec);
        }
      }
      rule.push_count = static_cast<int>(rule.push_indices.size());
    } else {
      try {
        rule.push_count = std::stoi(push_arg);
      } catch (...) {
        throw RuleParseError(line_no, "bad push spec: " + push_spec);
      }
      if (rule.push_count < 0 || rule.push_count > 1)
        throw RuleParseError(line_no, "push count must be 0 or 1");
    }

    const std::string why = check_rule(rule);
    if (!why.empty()) {
      if (why.find("placeholder") != std::string::npos || why.find("unclosed") != std::string::npos)
        throw BadPlaceholder(rule.opcode, why);
      throw CategoryMismatch(rule.opcode, why);
    }
    if (rs.rules.count(rule.opcode)) throw DuplicateOpcode(rule.opcode);
    rs.rules.emplace(rule.opcode, std::move(rule));
  }
  return rs;
}

RuleSet load_rules_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_rules(buf.str());
}

Category category_of(const RuleSet& rs, const std::string& opcode) {
  const TranslationRule* rule = rs.find(opcode);
  if (rule == nullptr) throw UnknownOpcode(opcode);
  return rule->category;
}

ValidationReport validate_ruleset(const RuleSet& rs) {
  ValidationReport report;
  for (const auto& [opcode, category] : reference_categories()) {
    if (rs.find(opcode) == nullptr) report.missing.push_back(opcode);
  }
  for (const auto& [opcode, rule] : rs.rules) {
    const std::string why = check_rule(rule);
    if (!why.empty()) report.violations.push_back(opcode + ": " + why);
    if (opcode == "tableswitch" || opcode == "lookupswitch")
      report.partial.push_back(opcode + ": only the default target is rendered");
  }
  return report;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << missing.size() << " missing, " << violations.size() << " violations";
  for (const auto& m : missing) out << "\n  missing: " << m;
  for (const auto& v : violations) out << "\n  violation: " << v;
  for (const auto& p : partial) out << "\n  partial: " << p;
  return out.str();
}

const std::map<std::string, Category>& reference_categories() {
  static const std::map<std::string, Category> table = [] {
    std::map<std::string, Category> m;
    auto add = [&m](Category cat, std::initializer_list<const char*> ops) {
      for (const char* op : ops) m.emplace(op, cat);
    };
    add(Category::PU, {"aconst_null", "anewarray", "bipush", "dconst", "fconst", "iconst",
                       "jsr", "jsr_w", "lconst", "ldc", "ldc_w", "ldc2_w", "new", "sipush"});
    add(Category::PO,
        {"areturn",      "athrow",       "dreturn",       "freturn",       "ireturn",
         "lreturn",      "if_acmpeq",    "if_acmpne",     "if_icmpeq",     "if_icmpne",
         "if_icmplt",    "if_icmpge",    "if_icmpgt",     "if_icmple",     "ifeq",
         "ifne",         "iflt",         "ifge",          "ifgt",          "ifle",
         "ifnonnull",    "ifnull",       "invokedynamic", "invokeinterface",
         "invokespecial", "invokestatic", "invokevirtual", "ishl",          "ishr",
         "lookupswitch", "monitorexit",  "pop",           "pop2",          "putfield",
         "putstatic",    "tableswitch"});
    add(Category::POU,
        {"aaload",  "arraylength", "baload",  "caload",  "d2f",     "d2i",     "d2l",
         "dadd",    "daload",      "dcmpg",   "dcmpl",   "ddiv",    "dmul",    "dneg",
         "drem",    "dsub",        "dup",     "dup_x1",  "dup_x2",  "dup2",    "dup2_x1",
         "dup2_x2", "f2d",         "f2i",     "f2l",     "fadd",    "faload",  "fcmpg",
         "fcmpl",   "fdiv",        "fmul",    "fneg",    "frem",    "fsub",    "getfield",
         "getstatic", "i2b",       "i2c",     "i2d",     "i2f",     "i2l",     "i2s",
         "iadd",    "iaload",      "iand",    "idiv",    "imul",    "ineg",    "instanceof",
         "ior",     "irem",        "isub",    "iushr",   "ixor",    "l2d",     "l2f",
         "l2i",     "ladd",        "laload",  "land",    "lcmp",    "ldiv",    "lmul",
         "lneg",    "lor",         "lrem",    "lshl",    "lshr",    "lsub",    "lushr",
         "multianewarray", "lxor", "newarray", "saload", "swap"});
    add(Category::V, {"iinc", "wide"});
    add(Category::SV, {"aastore", "aload", "astore", "bastore", "castore", "dastore",
                       "dload", "dstore", "fastore", "fload", "fstore", "iastore",
                       "iload", "istore", "lastore", "lload", "lstore", "sastore"});
    add(Category::O, {"checkcast", "goto", "goto_w", "nop", "ret", "return"});
    return m;
  }();
  return table;
}

}  // namespace transearch
