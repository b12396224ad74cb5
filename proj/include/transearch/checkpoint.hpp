// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Versioned binary checkpoint: training config, artifact checksums, both
// encoders, the embedding matrix (or matrices), optimizer moments and the
// epoch counter. The payload is protected by a trailing content hash so a
// truncated or edited file is rejected on load.
#pragma once

#include <cstdint>
#include <string>

#include "transearch/trainer.hpp"

namespace transearch {

struct Checkpoint {
  TrainConfig config;
  std::uint64_t vocab_checksum = 0;
  std::uint64_t ruleset_checksum = 0;
  std::uint64_t comment_vocab_checksum = 0;  // 0 with the shared mapping
  SiameseModel<float> model;
  AdamState<float> moments;
  int epoch = 0;
};

/// Byte-exact round trip.
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);

/// Throws VersionMismatch for a non-current format version and CorruptFile
/// for bad magic, truncation, or payload-hash mismatch.
Checkpoint load_checkpoint(const std::string& path);

/// Verifies that the vocabulary/rule files on disk are the ones the
/// checkpoint was trained with. Throws ChecksumMismatch.
void verify_checkpoint_artifacts(const Checkpoint& checkpoint, const std::string& vocab_path,
                                 const std::string& rules_path,
                                 const std::string& comment_vocab_path = {});

}  // namespace transearch
