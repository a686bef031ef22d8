#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "tepgnn/java/ast.hpp"
#include "tepgnn/java/token.hpp"

namespace tepgnn::java {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string expected, std::string found);
  SourcePos pos() const { return pos_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourcePos pos_;
  std::string expected_;
  std::string found_;
};

/// Builds the syntax tree of one Java test file. Package and import headers
/// are consumed but do not appear in the tree. Node ids are pre-order.
Ast parse(std::span<const Token> tokens, std::string source_path);

/// lex + parse. Lex failures surface as LexError.
Ast parse_source(std::string_view source, std::string source_path);

struct FileFailure {
  std::string path;
  std::string message;
};

/// Reads and parses a file, capturing any lex/parse/IO failure instead of
/// throwing so batch jobs can skip the file and report it.
std::variant<Ast, FileFailure> parse_file(const std::filesystem::path& path);

}  // namespace tepgnn::java
