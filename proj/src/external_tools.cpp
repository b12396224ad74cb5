// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0

#include "transearch/external_tools.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "transearch/errors.hpp"
#include "transearch/hash.hpp"

namespace fs = std::filesystem;

namespace transearch {
namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileUnreadable(path.string());
  out << content;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

// exit status of `cmd` run in `dir`, with stdout/stderr captured in files
int run_in(const fs::path& dir, const std::string& cmd, const fs::path& out_file,
           const fs::path& err_file) {
  std::ostringstream full;
  full << "cd '" << dir.string() << "' && " << cmd << " > '" << out_file.string() << "' 2> '"
       << err_file.string() << "'";
  const int status = std::system(full.str().c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

void require_runnable(const std::string& tool) {
  if (tool.find('/') != std::string::npos && !fs::exists(tool)) throw ToolMissing(tool);
}

}  // namespace

std::string disassemble_external(const std::string& code, const std::string& work_dir,
                                 const ToolConfig& tools) {
  const std::string key = hex64(fnv1a64(code));
  const fs::path cache_dir = fs::path(work_dir) / "cache";
  const fs::path cache_file = cache_dir / (key + ".disasm");
  if (fs::exists(cache_file)) return read_file(cache_file);

  require_runnable(tools.compiler);
  require_runnable(tools.disassembler);

  // bare methods get a synthetic wrapper class
  std::string class_name = "Snippet";
  std::string source = code;
  static const std::regex class_decl(R"(\bclass\s+([A-Za-z_$][A-Za-z0-9_$]*))");
  std::smatch m;
  if (std::regex_search(code, m, class_decl)) {
    class_name = m[1].str();
  } else {
    source = "class Snippet {\n" + code + "\n}\n";
  }

  const fs::path build_dir = fs::path(work_dir) / ("build_" + key);
  fs::create_directories(build_dir);
  write_file(build_dir / (class_name + ".java"), source);

  const fs::path out_file = build_dir / "tool.out";
  const fs::path err_file = build_dir / "tool.err";
  int status = run_in(build_dir, "'" + tools.compiler + "' " + class_name + ".java", out_file,
                      err_file);
  if (status == 127 || status == -1) throw ToolMissing(tools.compiler);
  if (status != 0) throw CompileFailed(read_file(err_file));

  status = run_in(build_dir, "'" + tools.disassembler + "' -p -c -l " + class_name, out_file,
                  err_file);
  if (status == 127 || status == -1) throw ToolMissing(tools.disassembler);
  if (status != 0) throw CompileFailed(read_file(err_file));

  const std::string disassembly = read_file(out_file);
  fs::create_directories(cache_dir);
  write_file(cache_file, disassembly);
  return disassembly;
}

}  // namespace transearch
