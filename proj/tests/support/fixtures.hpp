#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lola/pipeline.hpp"

namespace lola::testing {

inline std::filesystem::path spec_dir() { return std::filesystem::path(LOLA_SPEC_DIR); }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Analysis analyze_file(const std::filesystem::path& path) { return analyze(read_file(path)); }

inline bool has_code(const Diagnostics& diags, DiagCode code) {
  for (const auto& d : diags) {
    if (d.code == code && d.severity == Severity::Error) return true;
  }
  return false;
}

}  // namespace lola::testing
