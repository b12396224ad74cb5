// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "transearch/detail/binary_io.hpp"
#include "transearch/hash.hpp"
#include "transearch/text.hpp"

namespace transearch {
namespace {

constexpr const char kMagic[] = "TSCKPT\0\0";  // 8 bytes
constexpr std::uint32_t kVersion = 1;

void write_config(std::ostream& out, const TrainConfig& c) {
  detail::write_u32(out, static_cast<std::uint32_t>(c.batch_size));
  detail::write_u32(out, static_cast<std::uint32_t>(c.vocab_size));
  detail::write_u32(out, static_cast<std::uint32_t>(c.embed_dim));
  detail::write_u32(out, static_cast<std::uint32_t>(c.hidden_dim));
  detail::write_f32(out, c.margin);
  detail::write_f32(out, c.learning_rate);
  detail::write_f32(out, c.dropout);
  detail::write_u32(out, static_cast<std::uint32_t>(c.epochs));
  detail::write_u64(out, c.seed);
  detail::write_f32(out, c.weight_decay);
  detail::write_f32(out, c.clip_norm);
  detail::write_u32(out, static_cast<std::uint32_t>(c.max_sequence_length));
  detail::write_f32(out, c.validation_fraction);
}

TrainConfig read_config(std::istream& in, const std::string& path) {
  TrainConfig c;
  c.batch_size = static_cast<int>(detail::read_u32(in, path));
  c.vocab_size = static_cast<int>(detail::read_u32(in, path));
  c.embed_dim = static_cast<int>(detail::read_u32(in, path));
  c.hidden_dim = static_cast<int>(detail::read_u32(in, path));
  c.margin = detail::read_f32(in, path);
  c.learning_rate = detail::read_f32(in, path);
  c.dropout = detail::read_f32(in, path);
  c.epochs = static_cast<int>(detail::read_u32(in, path));
  c.seed = detail::read_u64(in, path);
  c.weight_decay = detail::read_f32(in, path);
  c.clip_norm = detail::read_f32(in, path);
  c.max_sequence_length = static_cast<int>(detail::read_u32(in, path));
  c.validation_fraction = detail::read_f32(in, path);
  return c;
}

void write_encoder(std::ostream& out, const EncoderParams<float>& p) {
  detail::write_matrix(out, p.input_weights);
  detail::write_matrix(out, p.recurrent_weights);
  detail::write_vector(out, p.gate_bias);
  detail::write_matrix(out, p.attention_weights);
  detail::write_vector(out, p.attention_bias);
  detail::write_vector(out, p.context_vector);
}

EncoderParams<float> read_encoder(std::istream& in, const std::string& path) {
  EncoderParams<float> p;
  p.input_weights = detail::read_matrix(in, path);
  p.recurrent_weights = detail::read_matrix(in, path);
  p.gate_bias = detail::read_vector(in, path);
  p.attention_weights = detail::read_matrix(in, path);
  p.attention_bias = detail::read_vector(in, path);
  p.context_vector = detail::read_vector(in, path);
  return p;
}

void write_model(std::ostream& out, const SiameseModel<float>& model) {
  detail::write_u32(out, model.separate_embeddings() ? 1 : 0);
  detail::write_matrix(out, model.embeddings);
  if (model.separate_embeddings()) detail::write_matrix(out, model.comment_embeddings);
  write_encoder(out, model.translation_encoder);
  write_encoder(out, model.comment_encoder);
}

SiameseModel<float> read_model(std::istream& in, const std::string& path) {
  SiameseModel<float> model;
  const bool separate = detail::read_u32(in, path) != 0;
  model.embeddings = detail::read_matrix(in, path);
  if (separate) model.comment_embeddings = detail::read_matrix(in, path);
  model.translation_encoder = read_encoder(in, path);
  model.comment_encoder = read_encoder(in, path);
  return model;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ostringstream payload(std::ios::binary);
  write_config(payload, checkpoint.config);
  detail::write_u64(payload, checkpoint.vocab_checksum);
  detail::write_u64(payload, checkpoint.ruleset_checksum);
  detail::write_u64(payload, checkpoint.comment_vocab_checksum);
  detail::write_u32(payload, static_cast<std::uint32_t>(checkpoint.epoch));
  write_model(payload, checkpoint.model);
  write_model(payload, checkpoint.moments.first_moment);
  write_model(payload, checkpoint.moments.second_moment);
  detail::write_u64(payload, static_cast<std::uint64_t>(checkpoint.moments.step));

  const std::string bytes = payload.str();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileUnreadable(path);
  out.write(kMagic, 8);
  detail::write_u32(out, kVersion);
  detail::write_u64(out, static_cast<std::uint64_t>(bytes.size()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  detail::write_u64(out, fnv1a64(bytes));
  if (!out) throw FileUnreadable(path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path);
  char magic[8];
  if (!in.read(magic, 8)) throw CorruptFile(path);
  if (std::memcmp(magic, kMagic, 8) != 0) throw CorruptFile(path);
  const std::uint32_t version = detail::read_u32(in, path);
  if (version != kVersion) throw VersionMismatch(static_cast<int>(version), kVersion);
  const std::uint64_t size = detail::read_u64(in, path);
  std::string bytes(size, '\0');
  if (size > 0 && !in.read(bytes.data(), static_cast<std::streamsize>(size)))
    throw CorruptFile(path);
  const std::uint64_t stored_hash = detail::read_u64(in, path);
  if (stored_hash != fnv1a64(bytes)) throw CorruptFile(path);

  std::istringstream payload(bytes, std::ios::binary);
  Checkpoint checkpoint;
  checkpoint.config = read_config(payload, path);
  checkpoint.vocab_checksum = detail::read_u64(payload, path);
  checkpoint.ruleset_checksum = detail::read_u64(payload, path);
  checkpoint.comment_vocab_checksum = detail::read_u64(payload, path);
  checkpoint.epoch = static_cast<int>(detail::read_u32(payload, path));
  checkpoint.model = read_model(payload, path);
  checkpoint.moments.first_moment = read_model(payload, path);
  checkpoint.moments.second_moment = read_model(payload, path);
  checkpoint.moments.step = static_cast<long long>(detail::read_u64(payload, path));
  return checkpoint;
}

void verify_checkpoint_artifacts(const Checkpoint& checkpoint, const std::string& vocab_path,
                                 const std::string& rules_path,
                                 const std::string& comment_vocab_path) {
  if (file_checksum(vocab_path) != checkpoint.vocab_checksum)
    throw ChecksumMismatch("vocabulary file " + vocab_path);
  if (file_checksum(rules_path) != checkpoint.ruleset_checksum)
    throw ChecksumMismatch("rule file " + rules_path);
  if (checkpoint.comment_vocab_checksum != 0) {
    if (comment_vocab_path.empty() ||
        file_checksum(comment_vocab_path) != checkpoint.comment_vocab_checksum)
      throw ChecksumMismatch("comment vocabulary file " + comment_vocab_path);
  }
}

}  // namespace transearch
