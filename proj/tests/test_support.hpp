#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tepgnn/java/parser.hpp"

namespace tepgnn::testing {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(TEPGNN_FIXTURES) / rel;
}

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture(rel), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline java::Ast parse_fixture(const std::string& rel) {
  return java::parse_source(read_fixture(rel), fixture(rel).string());
}

inline std::vector<std::filesystem::path> java_corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(fixture("java"))) {
    if (entry.path().extension() == ".java") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline java::NodeId find_node(const java::Ast& ast, java::NodeKind kind, const std::string& value,
                              int occurrence = 0) {
  for (const auto& n : ast.nodes) {
    if (n.kind == kind && n.value && *n.value == value && occurrence-- == 0) return n.id;
  }
  throw std::runtime_error("node not found: " + value);
}

}  // namespace tepgnn::testing
