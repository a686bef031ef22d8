#include "tepgnn/java/token.hpp"

#include <algorithm>
#include <array>

namespace tepgnn::java {

namespace {

constexpr std::array kKeywords = {
    "abstract", "assert",     "boolean",   "break",      "byte",     "case",
    "catch",    "char",       "class",     "const",      "continue", "default",
    "do",       "double",     "else",      "enum",       "extends",  "final",
    "finally",  "float",      "for",       "goto",       "if",       "implements",
    "import",   "instanceof", "int",       "interface",  "long",     "native",
    "new",      "package",    "private",   "protected",  "public",   "return",
    "short",    "static",     "strictfp",  "super",      "switch",   "synchronized",
    "this",     "throw",      "throws",    "transient",  "try",      "void",
    "volatile", "while",
};

// Longest first so greedy matching picks `>>>=` over `>>`.
constexpr std::array kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "->", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=",   "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<", ">>", "=",
    "<",    ">",   "!",   "~",   "?",  ":",  "+",  "-",  "*",  "/",  "&",  "|",
    "^",    "%",
};

constexpr std::array kSeparators = {"...", "::", "(", ")", "{", "}", "[", "]", ";", ",", "."};

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next_token());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  unsigned char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? static_cast<unsigned char>(src_[i_ + ahead]) : '\0';
  }
  bool starts_with(std::string_view s) const { return src_.substr(i_, s.size()) == s; }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && !at_end(); ++k) advance();
  }

  void skip_trivia() {
    while (!at_end()) {
      unsigned char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
        advance();
      } else if (starts_with("//")) {
        while (!at_end() && peek() != '\n') advance();
      } else if (starts_with("/*")) {
        SourcePos start = pos_;
        advance(2);
        while (!at_end() && !starts_with("*/")) advance();
        if (at_end()) throw LexError(start, "unterminated block comment");
        advance(2);
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, std::size_t begin, SourcePos pos) const {
    return Token{kind, std::string(src_.substr(begin, i_ - begin)), pos};
  }

  Token next_token() {
    const std::size_t begin = i_;
    const SourcePos pos = pos_;
    const unsigned char c = peek();

    if (is_ident_start(c)) {
      while (!at_end() && is_ident_part(peek())) advance();
      Token t = make(TokenKind::Identifier, begin, pos);
      if (t.text == "true" || t.text == "false" || t.text == "null") {
        t.kind = TokenKind::Literal;
      } else if (is_java_keyword(t.text)) {
        t.kind = TokenKind::Keyword;
      }
      return t;
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
      lex_number();
      return make(TokenKind::Literal, begin, pos);
    }
    if (starts_with("\"\"\"")) {
      advance(3);
      while (!at_end() && !starts_with("\"\"\"")) {
        if (peek() == '\\') advance();
        if (!at_end()) advance();
      }
      if (at_end()) throw LexError(pos, "unterminated text block");
      advance(3);
      return make(TokenKind::Literal, begin, pos);
    }
    if (c == '"' || c == '\'') {
      lex_quoted(static_cast<char>(c), pos);
      return make(TokenKind::Literal, begin, pos);
    }
    if (c == '@') {
      advance();
      return make(TokenKind::AnnotationMarker, begin, pos);
    }
    for (std::string_view sep : kSeparators) {
      if (starts_with(sep)) {
        advance(sep.size());
        return make(TokenKind::Separator, begin, pos);
      }
    }
    for (std::string_view op : kOperators) {
      if (starts_with(op)) {
        advance(op.size());
        return make(TokenKind::Operator, begin, pos);
      }
    }
    throw LexError(pos, "unexpected character (byte " + std::to_string(static_cast<int>(c)) + ")");
  }

  void lex_number() {
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance(2);
      while (!at_end() && (is_hex_digit(peek()) || peek() == '_' || peek() == '.')) advance();
      if (peek() == 'p' || peek() == 'P') {
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (!at_end() && is_digit(peek())) advance();
      }
    } else {
      while (!at_end() && (is_digit(peek()) || peek() == '_')) advance();
      if (peek() == '.' && is_digit(peek(1))) {
        advance();
        while (!at_end() && (is_digit(peek()) || peek() == '_')) advance();
      } else if (peek() == '.' && !is_ident_start(peek(1)) && peek(1) != '.') {
        advance();  // `1.` is a valid double literal
      }
      if (peek() == 'e' || peek() == 'E') {
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (!at_end() && is_digit(peek())) advance();
      }
    }
    // binary/octal prefixes and suffixes fold into the identifier-part scan
    while (!at_end() && (is_ident_part(peek()))) advance();
  }

  void lex_quoted(char quote, SourcePos start) {
    advance();
    while (true) {
      if (at_end() || peek() == '\n') {
        throw LexError(start, quote == '"' ? "unterminated string literal"
                                           : "unterminated character literal");
      }
      const unsigned char c = peek();
      advance();
      if (c == '\\') {
        if (at_end()) continue;
        advance();
      } else if (c == static_cast<unsigned char>(quote)) {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Separator: return "separator";
    case TokenKind::AnnotationMarker: return "annotation-marker";
  }
  return "?";
}

LexError::LexError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                         message),
      pos_(pos) {}

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace tepgnn::java
