// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Little-endian primitives for the versioned binary artifacts (checkpoints,
// search indexes). Reads throw CorruptFile on truncation.
#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "transearch/errors.hpp"
#include "transearch/types.hpp"

namespace transearch::detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

inline void write_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(out, bits);
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void write_matrix(std::ostream& out, const MatrixF& m) {
  write_u32(out, static_cast<std::uint32_t>(m.rows()));
  write_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) write_f32(out, m(r, c));
}

inline void write_vector(std::ostream& out, const VectorF& v) {
  write_u32(out, static_cast<std::uint32_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) write_f32(out, v(i));
}

inline std::uint32_t read_u32(std::istream& in, const std::string& path) {
  char bytes[4];
  if (!in.read(bytes, 4)) throw CorruptFile(path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in, const std::string& path) {
  char bytes[8];
  if (!in.read(bytes, 8)) throw CorruptFile(path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return v;
}

inline float read_f32(std::istream& in, const std::string& path) {
  const std::uint32_t bits = read_u32(in, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline std::string read_string(std::istream& in, const std::string& path) {
  const std::uint32_t size = read_u32(in, path);
  std::string s(size, '\0');
  if (size > 0 && !in.read(s.data(), size)) throw CorruptFile(path);
  return s;
}

inline MatrixF read_matrix(std::istream& in, const std::string& path) {
  const std::uint32_t rows = read_u32(in, path);
  const std::uint32_t cols = read_u32(in, path);
  MatrixF m(rows, cols);
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = read_f32(in, path);
  return m;
}

inline VectorF read_vector(std::istream& in, const std::string& path) {
  const std::uint32_t size = read_u32(in, path);
  VectorF v(size);
  for (Index i = 0; i < v.size(); ++i) v(i) = read_f32(in, path);
  return v;
}

}  // namespace transearch::detail
