// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/disasm.hpp"

#include <doctest.h>

#include "transearch/errors.hpp"
#include "transearch/rng.hpp"
#include "test_util.hpp"

using namespace transearch;

namespace {

MethodDisassembly listing_one_method() {
  const auto methods = parse_disassembly(test_util::read_file(
      test_util::fixture_path("for_loop_sum.disasm")));
  REQUIRE(methods.size() == 2);
  return methods[1];
}

}  // namespace

TEST_CASE("bare instruction fragment parses as one anonymous method") {
  const auto methods = parse_disassembly("0: iconst_0\n1: istore_2\n");
  REQUIRE(methods.size() == 1);
  const auto& md = methods[0];
  REQUIRE(md.instructions.size() == 2);
  CHECK(md.instructions[0].index == 0);
  CHECK(md.instructions[0].opcode == "iconst");
  REQUIRE(md.instructions[0].operands.size() == 1);  // fused-constant rule
  CHECK(md.instructions[0].operands[0] == 0);
  CHECK(md.instructions[1].index == 1);
  CHECK(md.instructions[1].opcode == "istore");
  REQUIRE(md.instructions[1].operands.size() == 1);
  CHECK(md.instructions[1].operands[0] == 2);
}

TEST_CASE("empty input yields no methods") {
  CHECK(parse_disassembly("").empty());
  CHECK(parse_disassembly("\n  \n").empty());
}

TEST_CASE("full dump: methods, frame header and variable table") {
  const auto methods = parse_disassembly(test_util::read_file(
      test_util::fixture_path("for_loop_sum.disasm")));
  REQUIRE(methods.size() == 2);

  const auto& ctor = methods[0];
  CHECK(ctor.method_id == "CalArraySum()");
  CHECK(ctor.max_stack == 1);
  CHECK(ctor.max_locals == 1);
  REQUIRE(ctor.instructions.size() == 3);
  CHECK(ctor.instructions[1].opcode == "invokespecial");
  CHECK(ctor.instructions[1].descriptor_comment == "Method java/lang/Object.\"<init>\":()V");

  const auto& sum = methods[1];
  CHECK(sum.method_id == "int calArraySum(int[])");
  CHECK(sum.max_stack == 3);
  CHECK(sum.max_locals == 4);
  REQUIRE(sum.instructions.size() == 18);
  CHECK(sum.instructions[7].opcode == "if_icmpge");
  REQUIRE(sum.instructions[7].operands.size() == 1);
  CHECK(sum.instructions[7].operands[0] == 22);
  CHECK(sum.instructions[16].index == 22);

  // the Start/Length/Slot/Name/Signature block
  REQUIRE(sum.variable_table.size() == 4);
  const auto& entry = sum.variable_table[2];
  CHECK(entry.start == 2);
  CHECK(entry.length == 22);
  CHECK(entry.slot == 2);
  CHECK(entry.name == "sum");
  CHECK(entry.signature == "I");
}

TEST_CASE("iinc keeps both operands") {
  const auto md = listing_one_method();
  const auto& iinc = md.instructions[14];
  CHECK(iinc.opcode == "iinc");
  REQUIRE(iinc.operands.size() == 2);
  CHECK(iinc.operands[0] == 3);
  CHECK(iinc.operands[1] == 1);
}

TEST_CASE("resolve_variable honors slot scopes") {
  const auto md = listing_one_method();
  CHECK(resolve_variable(md, 2, 4).name == "sum");
  CHECK(resolve_variable(md, 3, 10).name == "i");
  CHECK_THROWS_AS(resolve_variable(md, 9, 0), UnknownSlot);
  // the store that opens a scope is itself one byte before it
  CHECK_THROWS_AS(resolve_variable(md, 2, 1), UnknownSlot);
}

TEST_CASE("resolve_variable prefers the innermost scope") {
  MethodDisassembly md;
  md.variable_table = {{0, 30, 1, "outer", "I"}, {10, 5, 1, "inner", "I"}};
  CHECK(resolve_variable(md, 1, 12).name == "inner");
  CHECK(resolve_variable(md, 1, 20).name == "outer");
}

TEST_CASE("split_fused_operand") {
  CHECK(split_fused_operand("istore_2") == std::pair<std::string, std::optional<long long>>{"istore", 2});
  CHECK(split_fused_operand("iconst_m1") ==
        std::pair<std::string, std::optional<long long>>{"iconst", -1});
  CHECK(split_fused_operand("goto") == std::pair<std::string, std::optional<long long>>{"goto", std::nullopt});
  CHECK(split_fused_operand("dup_x1").first == "dup_x1");
  CHECK(split_fused_operand("ldc2_w").first == "ldc2_w");
  CHECK(split_fused_operand("if_icmpge").first == "if_icmpge");
  CHECK(split_fused_operand("aload_0") == std::pair<std::string, std::optional<long long>>{"aload", 0});
}

TEST_CASE("malformed instruction line reports its line number") {
  const std::string text = "Code:\n   stack=1, locals=1, args_size=1\n   0: 123bogus\n";
  CHECK_THROWS_AS(parse_disassembly(text), MalformedLine);
}

TEST_CASE("non-increasing indices are malformed") {
  CHECK_THROWS_AS(parse_disassembly("0: iconst_0\n0: iconst_1\n"), MalformedLine);
}

TEST_CASE("method signature without a code section") {
  const std::string text = "class Foo {\n  int bar(int);\n  int baz(int);\n}\n";
  CHECK_THROWS_AS(parse_disassembly(text), MissingCode);
}

TEST_CASE("tableswitch block keeps the default target") {
  const std::string text =
      "Code:\n"
      "   stack=1, locals=2, args_size=2\n"
      "      0: iload_1\n"
      "      1: tableswitch   { // 1 to 2\n"
      "                    1: 24\n"
      "                    2: 27\n"
      "              default: 30\n"
      "         }\n"
      "     24: return\n";
  const auto methods = parse_disassembly(text);
  REQUIRE(methods.size() == 1);
  REQUIRE(methods[0].instructions.size() == 3);
  const auto& sw = methods[0].instructions[1];
  CHECK(sw.opcode == "tableswitch");
  REQUIRE(sw.operands.size() == 1);
  CHECK(sw.operands[0] == 30);
}

TEST_CASE("bare word operand lands in the comment slot") {
  const auto methods = parse_disassembly("0: newarray       int\n");
  REQUIRE(methods.size() == 1);
  CHECK(methods[0].instructions[0].opcode == "newarray");
  CHECK(methods[0].instructions[0].descriptor_comment == "int");
}

// property: parsing is pure, indices strictly increase, covered slots resolve
TEST_CASE("generated well-formed dumps parse stably") {
  Rng rng(20260809);
  for (int trial = 0; trial < 25; ++trial) {
    const int count = 3 + rng.uniform_int(20);
    std::string body;
    int index = 0;
    std::vector<int> indices;
    for (int i = 0; i < count; ++i) {
      indices.push_back(index);
      const int kind = rng.uniform_int(3);
      if (kind == 0)
        body += "   " + std::to_string(index) + ": iconst_" + std::to_string(rng.uniform_int(6)) + "\n";
      else if (kind == 1)
        body += "   " + std::to_string(index) + ": istore_1\n";
      else
        body += "   " + std::to_string(index) + ": iload_1\n";
      index += 1 + rng.uniform_int(3);
    }
    std::string text =
        "class G {\n  void gen();\n    Code:\n       stack=9, locals=2, args_size=1\n" + body;
    text += "      LocalVariableTable:\n        Start  Length  Slot  Name   Signature\n";
    text += "            0  " + std::to_string(index + 4) + "  1  x  I\n}\n";

    const auto first = parse_disassembly(text);
    const auto second = parse_disassembly(text);
    REQUIRE(first.size() == 1);
    REQUIRE(second.size() == 1);
    REQUIRE(first[0].instructions.size() == static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < first[0].instructions.size(); ++k) {
      CHECK(first[0].instructions[k].index == indices[k]);
      CHECK(first[0].instructions[k].opcode == second[0].instructions[k].opcode);
      if (k > 0)
        CHECK(first[0].instructions[k].index > first[0].instructions[k - 1].index);
    }
    // every load/store slot is covered by the table
    for (const auto& instr : first[0].instructions) {
      if (instr.opcode == "istore" || instr.opcode == "iload")
        CHECK(resolve_variable(first[0], 1, instr.index).name == "x");
    }
  }
}
