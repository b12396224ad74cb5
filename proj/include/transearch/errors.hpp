// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace transearch {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- disassembly parsing ----

class MalformedLine : public Error {
 public:
  MalformedLine(int line_no, const std::string& line)
      : Error("malformed instruction line " + std::to_string(line_no) + ": " + line),
        line_no(line_no) {}
  int line_no;
};

class MissingCode : public Error {
 public:
  explicit MissingCode(const std::string& method_id)
      : Error("method has no code section: " + method_id) {}
};

class UnknownSlot : public Error {
 public:
  UnknownSlot(int slot, int at_index)
      : Error("no local variable covers slot " + std::to_string(slot) +
              " at instruction index " + std::to_string(at_index)),
        slot(slot) {}
  int slot;
};

// ---- rule loading ----

class DuplicateOpcode : public Error {
 public:
  explicit DuplicateOpcode(const std::string& opcode)
      : Error("duplicate rule for opcode: " + opcode) {}
};

class BadPlaceholder : public Error {
 public:
  BadPlaceholder(const std::string& opcode, const std::string& detail)
      : Error("bad placeholder in rule for " + opcode + ": " + detail) {}
};

class CategoryMismatch : public Error {
 public:
  CategoryMismatch(const std::string& opcode, const std::string& detail)
      : Error("category mismatch in rule for " + opcode + ": " + detail) {}
};

class RuleParseError : public Error {
 public:
  RuleParseError(int line_no, const std::string& detail)
      : Error("rule file line " + std::to_string(line_no) + ": " + detail) {}
};

// ---- translation ----

class UnknownOpcode : public Error {
 public:
  explicit UnknownOpcode(const std::string& opcode)
      : Error("no translation rule for opcode: " + opcode), opcode(opcode) {}
  std::string opcode;
};

class StackOverflowSim : public Error {
 public:
  StackOverflowSim(int index, int max_stack)
      : Error("simulated operand stack exceeds declared depth " + std::to_string(max_stack) +
              " at instruction index " + std::to_string(index)) {}
};

// ---- text / vocabulary ----

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("cannot build a vocabulary from an empty corpus") {}
};

// ---- encoding ----

class EmptySequence : public Error {
 public:
  EmptySequence() : Error("cannot encode an empty (or fully padded) sequence") {}
};

class CacheMismatch : public Error {
 public:
  CacheMismatch() : Error("forward cache does not match the inputs given to the backward pass") {}
};

// ---- training ----

class TooFewPairs : public Error {
 public:
  explicit TooFewPairs(std::size_t n)
      : Error("need at least 2 pairs, got " + std::to_string(n)) {}
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(int epoch, int batch)
      : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
              std::to_string(batch)) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& detail) : Error("shape mismatch: " + detail) {}
};

// ---- retrieval ----

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cosine similarity is undefined for a zero vector") {}
};

class EmptyQuerySet : public Error {
 public:
  EmptyQuerySet() : Error("metric over an empty query set") {}
};

// ---- pipeline / persistence ----

class FileUnreadable : public Error {
 public:
  explicit FileUnreadable(const std::string& path) : Error("cannot read file: " + path) {}
};

class NoValidRecords : public Error {
 public:
  explicit NoValidRecords(const std::string& path)
      : Error("no valid records in corpus file: " + path) {}
};

class CompileFailed : public Error {
 public:
  explicit CompileFailed(const std::string& diagnostics)
      : Error("external compilation failed: " + diagnostics), diagnostics(diagnostics) {}
  std::string diagnostics;
};

class ToolMissing : public Error {
 public:
  explicit ToolMissing(const std::string& tool) : Error("external tool not found: " + tool) {}
};

class VersionMismatch : public Error {
 public:
  VersionMismatch(int found, int expected)
      : Error("checkpoint version " + std::to_string(found) + ", expected " +
              std::to_string(expected)) {}
};

class ChecksumMismatch : public Error {
 public:
  explicit ChecksumMismatch(const std::string& artifact)
      : Error("checksum mismatch for " + artifact) {}
};

class CorruptFile : public Error {
 public:
  explicit CorruptFile(const std::string& path) : Error("corrupt or truncated file: " + path) {}
};

}  // namespace transearch
