#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tepgnn::java {

enum class TokenKind : std::uint8_t {
  Identifier,
  Keyword,
  Literal,
  Operator,
  Separator,
  AnnotationMarker,
};

std::string_view to_string(TokenKind kind);

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  SourcePos pos;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const { return kind == TokenKind::Operator && text == t; }
  bool is_sep(std::string_view t) const { return kind == TokenKind::Separator && text == t; }
  bool is_kw(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

class LexError : public std::runtime_error {
 public:
  LexError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Splits Java source into tokens. Whitespace and comments are dropped;
/// string, char and text-block literals stay whole with their quotes.
std::vector<Token> lex(std::string_view source);

bool is_java_keyword(std::string_view word);

}  // namespace tepgnn::java
