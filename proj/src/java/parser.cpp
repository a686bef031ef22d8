#include "tepgnn/java/parser.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

namespace tepgnn::java {

namespace {

constexpr int kMaxDepth = 400;

constexpr std::array kPrimitiveTypes = {"boolean", "byte", "char",  "short", "int",
                                        "long",    "float", "double", "void"};

constexpr std::array kModifiers = {"public",   "private",   "protected", "static",
                                   "final",    "abstract",  "native",    "transient",
                                   "volatile", "strictfp",  "synchronized", "default"};

bool is_primitive(const Token& t) {
  return t.kind == TokenKind::Keyword &&
         std::find(kPrimitiveTypes.begin(), kPrimitiveTypes.end(), t.text) != kPrimitiveTypes.end();
}

bool is_modifier(const Token& t) {
  if (t.kind == TokenKind::Identifier) return t.text == "sealed";
  return t.kind == TokenKind::Keyword &&
         std::find(kModifiers.begin(), kModifiers.end(), t.text) != kModifiers.end();
}

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  return 0;
}

bool is_assign_op(std::string_view op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=" ||
         op == "&=" || op == "|=" || op == "^=" || op == "<<=" || op == ">>=" || op == ">>>=";
}

// `>>`-family tokens are split into single `>` characters so that nested type
// arguments close cleanly; the expression parser glues adjacent ones back.
std::vector<Token> split_angle_tokens(std::span<const Token> tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Operator && t.text.size() > 1 && t.text.starts_with(">>")) {
      SourcePos p = t.pos;
      for (char c : t.text) {
        out.push_back(Token{TokenKind::Operator, std::string(1, c), p});
        ++p.column;
      }
    } else {
      out.push_back(t);
    }
  }
  return out;
}

struct Builder {
  std::vector<AstNode> nodes;

  NodeId make(NodeKind kind, SourcePos pos, Role role = Role::None) {
    AstNode n;
    n.id = static_cast<NodeId>(nodes.size());
    n.kind = kind;
    n.pos = pos;
    n.role = role;
    nodes.push_back(std::move(n));
    return nodes.back().id;
  }
  NodeId leaf(NodeKind kind, std::string value, SourcePos pos,
              NameRole name_role = NameRole::None) {
    NodeId id = make(kind, pos);
    nodes[id].value = std::move(value);
    nodes[id].name_role = name_role;
    return id;
  }
  void add(NodeId parent, NodeId child) { nodes[parent].children.push_back(child); }
  void set_role(NodeId id, Role role) { nodes[id].role = role; }
};

class Parser {
 public:
  Parser(std::span<const Token> tokens, std::string path)
      : toks_(split_angle_tokens(tokens)), path_(std::move(path)) {
    glued_.resize(toks_.size(), false);
    for (std::size_t i = 1; i < toks_.size(); ++i) {
      const Token& a = toks_[i - 1];
      const Token& b = toks_[i];
      glued_[i] = a.pos.line == b.pos.line &&
                  b.pos.column == a.pos.column + static_cast<int>(a.text.size());
    }
  }

  Ast run() {
    NodeId root = b_.make(NodeKind::CompilationUnit, SourcePos{});
    skip_header();
    while (!at_end()) {
      if (accept_sep(";")) continue;
      std::vector<NodeId> annotations = parse_modifiers();
      b_.add(root, parse_type_declaration(annotations, /*nested=*/false));
    }
    return finish(root);
  }

 private:
  // ---- token helpers -------------------------------------------------------

  bool at_end() const { return p_ >= toks_.size(); }
  const Token& peek(std::size_t k = 0) const {
    static const Token kEof{TokenKind::Separator, "<eof>", SourcePos{}};
    return p_ + k < toks_.size() ? toks_[p_ + k] : kEof;
  }
  SourcePos pos() const {
    if (!at_end()) return peek().pos;
    return toks_.empty() ? SourcePos{} : toks_.back().pos;
  }
  bool glued(std::size_t k) const { return p_ + k < toks_.size() && glued_[p_ + k]; }

  const Token& take() {
    const Token& t = peek();
    if (!at_end()) ++p_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos(), expected, at_end() ? "end of file" : "'" + peek().text + "'");
  }

  bool check_sep(std::string_view s, std::size_t k = 0) const {
    return p_ + k < toks_.size() && peek(k).is_sep(s);
  }
  bool check_op(std::string_view s, std::size_t k = 0) const {
    return p_ + k < toks_.size() && peek(k).is_op(s);
  }
  bool check_kw(std::string_view s, std::size_t k = 0) const {
    return p_ + k < toks_.size() && peek(k).is_kw(s);
  }
  bool check_ident(std::size_t k = 0) const {
    return p_ + k < toks_.size() && peek(k).kind == TokenKind::Identifier;
  }

  bool accept_sep(std::string_view s) {
    if (!check_sep(s)) return false;
    ++p_;
    return true;
  }
  bool accept_op(std::string_view s) {
    if (!check_op(s)) return false;
    ++p_;
    return true;
  }
  bool accept_kw(std::string_view s) {
    if (!check_kw(s)) return false;
    ++p_;
    return true;
  }
  void expect_sep(std::string_view s) {
    if (!accept_sep(s)) fail("'" + std::string(s) + "'");
  }
  void expect_op(std::string_view s) {
    if (!accept_op(s)) fail("'" + std::string(s) + "'");
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s)) fail("'" + std::string(s) + "'");
  }
  const Token& expect_ident() {
    if (!check_ident()) fail("identifier");
    return take();
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.fail("shallower nesting");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  // ---- header --------------------------------------------------------------

  void skip_qualified_name() {
    expect_ident();
    while (accept_sep(".")) {
      if (accept_op("*")) break;
      expect_ident();
    }
  }

  void skip_header() {
    // `@Annotation package x;` only appears in package-info files; handle the plain form.
    if (accept_kw("package")) {
      skip_qualified_name();
      expect_sep(";");
    }
    while (check_kw("import")) {
      take();
      accept_kw("static");
      skip_qualified_name();
      expect_sep(";");
    }
  }

  // ---- types ---------------------------------------------------------------

  // Non-throwing scan of a type; on failure the caller restores p_.
  bool scan_type(std::string& out, bool allow_varargs = false) {
    if (at_end()) return false;
    if (is_primitive(peek())) {
      out += take().text;
    } else if (check_ident()) {
      out += take().text;
      while (true) {
        if (check_op("<")) {
          if (!scan_type_args(out)) return false;
        }
        if (check_sep(".") && check_ident(1)) {
          take();
          out += ".";
          out += take().text;
          continue;
        }
        break;
      }
    } else {
      return false;
    }
    while (check_sep("[") && check_sep("]", 1)) {
      p_ += 2;
      out += "[]";
    }
    if (allow_varargs && accept_sep("...")) out += "...";
    return true;
  }

  bool scan_type_args(std::string& out) {
    if (!accept_op("<")) return false;
    out += "<";
    if (accept_op(">")) {
      out += ">";
      return true;
    }
    while (true) {
      if (accept_op("?")) {
        out += "?";
        if (check_kw("extends") || check_kw("super")) {
          out += " " + take().text + " ";
          if (!scan_type(out)) return false;
        }
      } else if (!scan_type(out)) {
        return false;
      }
      if (accept_sep(",")) {
        out += ",";
        continue;
      }
      if (accept_op(">")) {
        out += ">";
        return true;
      }
      return false;
    }
  }

  bool scan_type_params(std::string& out) {
    if (!accept_op("<")) return false;
    out += "<";
    while (true) {
      if (!check_ident()) return false;
      out += take().text;
      if (accept_kw("extends")) {
        out += " extends ";
        if (!scan_type(out)) return false;
        while (accept_op("&")) {
          out += " & ";
          if (!scan_type(out)) return false;
        }
      }
      if (accept_sep(",")) {
        out += ",";
        continue;
      }
      if (accept_op(">")) {
        out += ">";
        return true;
      }
      return false;
    }
  }

  NodeId parse_type_ref(bool allow_varargs = false) {
    SourcePos at = pos();
    std::string text;
    std::size_t save = p_;
    if (!scan_type(text, allow_varargs)) {
      p_ = save;
      fail("type");
    }
    return b_.leaf(NodeKind::TypeRef, std::move(text), at, NameRole::Type);
  }

  NodeId parse_type_params_ref() {
    SourcePos at = pos();
    std::string text;
    if (!scan_type_params(text)) fail("type parameters");
    return b_.leaf(NodeKind::TypeRef, std::move(text), at, NameRole::Type);
  }

  // ---- declarations --------------------------------------------------------

  NodeId parse_annotation() {
    SourcePos at = pos();
    take();  // '@'
    if (check_kw("interface")) fail("annotation (annotation type declarations are not supported)");
    std::string name = expect_ident().text;
    while (check_sep(".") && check_ident(1)) {
      take();
      name += "." + take().text;
    }
    NodeId ann = b_.make(NodeKind::Annotation, at);
    b_.add(ann, b_.leaf(NodeKind::Name, std::move(name), at, NameRole::Type));
    if (accept_sep("(")) {
      if (!check_sep(")")) {
        do {
          if (check_ident() && check_op("=", 1)) {
            SourcePos pa = pos();
            NodeId assign = b_.make(NodeKind::Assign, pa);
            b_.add(assign, b_.leaf(NodeKind::Name, take().text, pa, NameRole::Member));
            take();  // '='
            b_.add(assign, parse_element_value());
            b_.add(ann, assign);
          } else {
            b_.add(ann, parse_element_value());
          }
        } while (accept_sep(","));
      }
      expect_sep(")");
    }
    return ann;
  }

  NodeId parse_element_value() {
    if (check_sep("{")) return parse_array_init();
    if (peek().kind == TokenKind::AnnotationMarker) return parse_annotation();
    return parse_expression();
  }

  // Modifiers are dropped; annotations become nodes.
  std::vector<NodeId> parse_modifiers() {
    std::vector<NodeId> annotations;
    while (!at_end()) {
      if (peek().kind == TokenKind::AnnotationMarker) {
        annotations.push_back(parse_annotation());
      } else if (is_modifier(peek()) && !(check_kw("default") && (check_op(":", 1) || check_op("->", 1)))) {
        if (check_kw("synchronized") && check_sep("(", 1)) break;
        take();
      } else if (check_ident() && peek().text == "non" && check_op("-", 1)) {
        p_ += 3;  // non-sealed
      } else {
        break;
      }
    }
    return annotations;
  }

  NodeId parse_type_declaration(const std::vector<NodeId>& annotations, bool nested) {
    if (check_ident() && peek().text == "record" && check_ident(1)) fail("class (records are not supported)");
    SourcePos at = pos();
    bool is_enum = false;
    if (accept_kw("class") || accept_kw("interface")) {
    } else if (accept_kw("enum")) {
      is_enum = true;
    } else {
      fail(nested ? "member declaration" : "class, interface or enum");
    }
    NodeId cls = b_.make(NodeKind::ClassDecl, at);
    for (NodeId a : annotations) b_.add(cls, a);
    const Token& name = expect_ident();
    b_.add(cls, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Type));
    std::string class_name = name.text;
    if (check_op("<")) b_.add(cls, parse_type_params_ref());
    if (accept_kw("extends")) {
      do {
        b_.add(cls, parse_type_ref());
      } while (accept_sep(","));
    }
    if (accept_kw("implements")) {
      do {
        b_.add(cls, parse_type_ref());
      } while (accept_sep(","));
    }
    if (check_ident() && peek().text == "permits") {
      take();
      do {
        b_.add(cls, parse_type_ref());
      } while (accept_sep(","));
    }
    parse_class_body(cls, class_name, is_enum, /*anonymous_depth=*/0);
    return cls;
  }

  void parse_enum_constants(NodeId cls) {
    while (check_ident() || peek().kind == TokenKind::AnnotationMarker) {
      std::vector<NodeId> annotations = parse_modifiers();
      SourcePos at = pos();
      NodeId field = b_.make(NodeKind::FieldDecl, at);
      for (NodeId a : annotations) b_.add(field, a);
      b_.add(field, b_.leaf(NodeKind::Name, expect_ident().text, at, NameRole::Declarator));
      if (accept_sep("(")) {
        if (!check_sep(")")) {
          do {
            b_.add(field, parse_expression());
          } while (accept_sep(","));
        }
        expect_sep(")");
      }
      if (check_sep("{")) fail("',' or ';' (enum constant bodies are not supported)");
      b_.add(cls, field);
      if (!accept_sep(",")) break;
    }
    accept_sep(";");
  }

  void parse_class_body(NodeId cls, const std::string& class_name, bool is_enum, int anonymous_depth) {
    expect_sep("{");
    if (is_enum) parse_enum_constants(cls);
    while (!accept_sep("}")) {
      if (at_end()) fail("'}'");
      if (accept_sep(";")) continue;
      std::vector<NodeId> annotations = parse_modifiers();
      if (check_sep("{")) {
        b_.add(cls, parse_block());
        continue;
      }
      if (check_kw("class") || check_kw("interface") || check_kw("enum") ||
          (check_ident() && peek().text == "record" && check_ident(1))) {
        if (anonymous_depth > 0) fail("member (types inside anonymous classes are not supported)");
        b_.add(cls, parse_type_declaration(annotations, /*nested=*/true));
        continue;
      }
      b_.add(cls, parse_member(annotations, class_name, anonymous_depth));
    }
  }

  NodeId parse_member(const std::vector<NodeId>& annotations, const std::string& class_name,
                      int anonymous_depth) {
    SourcePos at = pos();
    std::optional<NodeId> type_params;
    if (check_op("<")) type_params = parse_type_params_ref();

    // constructor
    if (check_ident() && peek().text == class_name && check_sep("(", 1)) {
      NodeId m = b_.make(NodeKind::MethodDecl, at);
      for (NodeId a : annotations) b_.add(m, a);
      if (type_params) b_.add(m, *type_params);
      const Token& name = take();
      b_.add(m, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Method));
      parse_method_rest(m, anonymous_depth);
      return m;
    }

    NodeId type = parse_type_ref();
    const Token& name = expect_ident();
    if (check_sep("(")) {
      NodeId m = b_.make(NodeKind::MethodDecl, at);
      for (NodeId a : annotations) b_.add(m, a);
      if (type_params) b_.add(m, *type_params);
      b_.add(m, type);
      b_.add(m, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Method));
      parse_method_rest(m, anonymous_depth);
      return m;
    }
    if (type_params) fail("'(' after generic method signature");
    NodeId field = b_.make(NodeKind::FieldDecl, at);
    for (NodeId a : annotations) b_.add(field, a);
    b_.add(field, type);
    parse_declarators(field, type, name, anonymous_depth);
    expect_sep(";");
    return field;
  }

  void parse_method_rest(NodeId method, int anonymous_depth) {
    expect_sep("(");
    if (!check_sep(")")) {
      do {
        b_.add(method, parse_formal_param());
      } while (accept_sep(","));
    }
    expect_sep(")");
    while (check_sep("[") && check_sep("]", 1)) p_ += 2;
    if (accept_kw("throws")) {
      do {
        b_.add(method, parse_type_ref());
      } while (accept_sep(","));
    }
    if (accept_kw("default")) {  // annotation member default value
      b_.add(method, parse_element_value());
      expect_sep(";");
      return;
    }
    if (accept_sep(";")) return;
    b_.add(method, parse_block(anonymous_depth));
  }

  NodeId parse_formal_param() {
    SourcePos at = pos();
    std::vector<NodeId> annotations = parse_modifiers();
    NodeId param = b_.make(NodeKind::Param, at);
    for (NodeId a : annotations) b_.add(param, a);
    NodeId type = parse_type_ref(/*allow_varargs=*/true);
    b_.add(param, type);
    const Token& name = expect_ident();
    b_.add(param, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
    append_dims(type);
    return param;
  }

  // `int a[]` style dims after the declarator name fold into the TypeRef.
  void append_dims(NodeId type) {
    while (check_sep("[") && check_sep("]", 1)) {
      p_ += 2;
      *b_.nodes[type].value += "[]";
    }
  }

  // Declarators after `Type name`: `[= init] {, name [= init]}`.
  void parse_declarators(NodeId decl, NodeId type, const Token& first, int anonymous_depth) {
    const Token* name = &first;
    while (true) {
      b_.add(decl, b_.leaf(NodeKind::Name, name->text, name->pos, NameRole::Declarator));
      append_dims(type);
      if (accept_op("=")) {
        b_.add(decl, check_sep("{") ? parse_array_init() : parse_expression(anonymous_depth));
      }
      if (!accept_sep(",")) break;
      name = &expect_ident();
    }
  }

  // ---- statements ----------------------------------------------------------

  NodeId parse_block(int anonymous_depth = 0) {
    DepthGuard guard(*this);
    SourcePos at = pos();
    expect_sep("{");
    NodeId block = b_.make(NodeKind::Block, at);
    while (!accept_sep("}")) {
      if (at_end()) fail("'}'");
      if (auto s = parse_statement(anonymous_depth)) b_.add(block, *s);
    }
    return block;
  }

  // Statement in a branch/body position; an empty `;` becomes an empty Block.
  NodeId parse_body(int anonymous_depth, Role role) {
    SourcePos at = pos();
    std::optional<NodeId> s = parse_statement(anonymous_depth);
    NodeId body = s ? *s : b_.make(NodeKind::Block, at);
    b_.set_role(body, role);
    return body;
  }

  NodeId parse_par_condition(int anonymous_depth) {
    expect_sep("(");
    NodeId cond = parse_expression(anonymous_depth);
    expect_sep(")");
    b_.set_role(cond, Role::Condition);
    return cond;
  }

  // Tries `[final|@A] Type name` at the cursor. Leaves the cursor after the
  // type when it returns true.
  bool looks_like_local_decl(std::vector<NodeId>& annotations, NodeId& type) {
    std::size_t save = p_;
    std::size_t nodes_before = b_.nodes.size();
    bool had_modifiers = false;
    while (check_kw("final") || peek().kind == TokenKind::AnnotationMarker) {
      had_modifiers = true;
      if (check_kw("final")) {
        take();
      } else {
        annotations.push_back(parse_annotation());
      }
    }
    SourcePos at = pos();
    std::string text;
    if (scan_type(text) && check_ident() &&
        (check_op("=", 1) || check_sep(";", 1) || check_sep(",", 1) || check_sep("[", 1) ||
         check_op(":", 1))) {
      type = b_.leaf(NodeKind::TypeRef, std::move(text), at, NameRole::Type);
      return true;
    }
    if (had_modifiers) fail("local variable declaration");
    p_ = save;
    b_.nodes.resize(nodes_before);
    annotations.clear();
    return false;
  }

  std::optional<NodeId> parse_statement(int anonymous_depth) {
    DepthGuard guard(*this);
    SourcePos at = pos();
    if (at_end()) fail("statement");
    if (accept_sep(";")) return std::nullopt;
    if (check_sep("{")) return parse_block(anonymous_depth);

    if (accept_kw("if")) {
      NodeId s = b_.make(NodeKind::IfStmt, at);
      b_.add(s, parse_par_condition(anonymous_depth));
      b_.add(s, parse_body(anonymous_depth, Role::Then));
      if (accept_kw("else")) b_.add(s, parse_body(anonymous_depth, Role::Else));
      return s;
    }
    if (accept_kw("while")) {
      NodeId s = b_.make(NodeKind::WhileStmt, at);
      b_.add(s, parse_par_condition(anonymous_depth));
      b_.add(s, parse_body(anonymous_depth, Role::Body));
      return s;
    }
    if (accept_kw("do")) {
      NodeId s = b_.make(NodeKind::DoWhileStmt, at);
      b_.add(s, parse_body(anonymous_depth, Role::Body));
      expect_kw("while");
      b_.add(s, parse_par_condition(anonymous_depth));
      expect_sep(";");
      return s;
    }
    if (accept_kw("for")) return parse_for(at, anonymous_depth);
    if (accept_kw("switch")) return parse_switch(at, anonymous_depth);
    if (accept_kw("return")) {
      NodeId s = b_.make(NodeKind::ReturnStmt, at);
      if (!check_sep(";")) b_.add(s, parse_expression(anonymous_depth));
      expect_sep(";");
      return s;
    }
    if (accept_kw("throw")) {
      NodeId s = b_.make(NodeKind::ThrowStmt, at);
      b_.add(s, parse_expression(anonymous_depth));
      expect_sep(";");
      return s;
    }
    if (accept_kw("break") || accept_kw("continue")) {
      NodeKind kind = toks_[p_ - 1].text == "break" ? NodeKind::BreakStmt : NodeKind::ContinueStmt;
      if (check_ident()) fail("';' (labeled jumps are not supported)");
      expect_sep(";");
      return b_.make(kind, at);
    }
    if (accept_kw("try")) return parse_try(at, anonymous_depth);
    if (check_kw("synchronized") && check_sep("(", 1)) {
      take();
      NodeId s = b_.make(NodeKind::SyncStmt, at);
      b_.add(s, parse_par_condition(anonymous_depth));
      NodeId body = parse_block(anonymous_depth);
      b_.set_role(body, Role::Body);
      b_.add(s, body);
      return s;
    }
    if (accept_kw("assert")) {
      NodeId s = b_.make(NodeKind::AssertStmt, at);
      b_.add(s, parse_expression(anonymous_depth));
      if (accept_op(":")) b_.add(s, parse_expression(anonymous_depth));
      expect_sep(";");
      return s;
    }
    if (check_kw("class") || check_kw("interface") || check_kw("enum")) {
      fail("statement (local type declarations are not supported)");
    }
    if (check_ident() && check_op(":", 1)) fail("statement (labeled statements are not supported)");

    std::vector<NodeId> annotations;
    NodeId type = 0;
    if (looks_like_local_decl(annotations, type)) {
      NodeId decl = b_.make(NodeKind::LocalVarDecl, at);
      for (NodeId a : annotations) b_.add(decl, a);
      b_.add(decl, type);
      const Token& name = take();
      parse_declarators(decl, type, name, anonymous_depth);
      expect_sep(";");
      return decl;
    }

    NodeId s = b_.make(NodeKind::ExprStmt, at);
    b_.add(s, parse_expression(anonymous_depth));
    expect_sep(";");
    return s;
  }

  NodeId parse_for(SourcePos at, int anonymous_depth) {
    NodeId s = b_.make(NodeKind::ForStmt, at);
    expect_sep("(");
    std::vector<NodeId> annotations;
    NodeId type = 0;
    SourcePos decl_at = pos();
    if (looks_like_local_decl(annotations, type)) {
      if (check_op(":", 1)) {
        NodeId param = b_.make(NodeKind::Param, decl_at, Role::Init);
        for (NodeId a : annotations) b_.add(param, a);
        b_.add(param, type);
        const Token& name = take();
        b_.add(param, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
        take();  // ':'
        b_.add(s, param);
        NodeId iterable = parse_expression(anonymous_depth);
        b_.set_role(iterable, Role::Condition);
        b_.add(s, iterable);
        expect_sep(")");
        b_.add(s, parse_body(anonymous_depth, Role::Body));
        return s;
      }
      NodeId decl = b_.make(NodeKind::LocalVarDecl, decl_at, Role::Init);
      for (NodeId a : annotations) b_.add(decl, a);
      b_.add(decl, type);
      const Token& name = take();
      parse_declarators(decl, type, name, anonymous_depth);
      b_.add(s, decl);
    } else if (!check_sep(";")) {
      do {
        NodeId e = parse_expression(anonymous_depth);
        b_.set_role(e, Role::Init);
        b_.add(s, e);
      } while (accept_sep(","));
    }
    expect_sep(";");
    if (!check_sep(";")) {
      NodeId cond = parse_expression(anonymous_depth);
      b_.set_role(cond, Role::Condition);
      b_.add(s, cond);
    }
    expect_sep(";");
    if (!check_sep(")")) {
      do {
        NodeId e = parse_expression(anonymous_depth);
        b_.set_role(e, Role::Update);
        b_.add(s, e);
      } while (accept_sep(","));
    }
    expect_sep(")");
    b_.add(s, parse_body(anonymous_depth, Role::Body));
    return s;
  }

  NodeId parse_switch(SourcePos at, int anonymous_depth) {
    NodeId s = b_.make(NodeKind::SwitchStmt, at);
    b_.add(s, parse_par_condition(anonymous_depth));
    expect_sep("{");
    while (!accept_sep("}")) {
      if (at_end()) fail("'}'");
      SourcePos case_at = pos();
      NodeId c = b_.make(NodeKind::SwitchCase, case_at);
      if (accept_kw("case")) {
        do {
          b_.add(c, parse_ternary(anonymous_depth));
        } while (accept_sep(","));
      } else if (!accept_kw("default")) {
        fail("'case' or 'default'");
      }
      if (accept_op("->")) {
        if (check_sep("{")) {
          b_.add(c, parse_block(anonymous_depth));
        } else if (check_kw("throw")) {
          b_.add(c, *parse_statement(anonymous_depth));
        } else {
          NodeId e = b_.make(NodeKind::ExprStmt, pos());
          b_.add(e, parse_expression(anonymous_depth));
          expect_sep(";");
          b_.add(c, e);
        }
      } else {
        expect_op(":");
        while (!check_kw("case") && !check_kw("default") && !check_sep("}")) {
          if (at_end()) fail("'}'");
          if (auto st = parse_statement(anonymous_depth)) b_.add(c, *st);
        }
      }
      b_.add(s, c);
    }
    return s;
  }

  NodeId parse_try(SourcePos at, int anonymous_depth) {
    NodeId s = b_.make(NodeKind::TryStmt, at);
    if (accept_sep("(")) {
      while (!accept_sep(")")) {
        std::vector<NodeId> annotations;
        NodeId type = 0;
        SourcePos decl_at = pos();
        if (looks_like_local_decl(annotations, type)) {
          NodeId decl = b_.make(NodeKind::LocalVarDecl, decl_at, Role::Init);
          for (NodeId a : annotations) b_.add(decl, a);
          b_.add(decl, type);
          const Token& name = take();
          b_.add(decl, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
          expect_op("=");
          b_.add(decl, parse_expression(anonymous_depth));
          b_.add(s, decl);
        } else {
          NodeId e = parse_expression(anonymous_depth);
          b_.set_role(e, Role::Init);
          b_.add(s, e);
        }
        if (!accept_sep(";") && !check_sep(")")) fail("';' or ')'");
      }
    }
    NodeId body = parse_block(anonymous_depth);
    b_.set_role(body, Role::Body);
    b_.add(s, body);
    bool handled = false;
    while (check_kw("catch")) {
      SourcePos catch_at = pos();
      take();
      handled = true;
      NodeId c = b_.make(NodeKind::CatchClause, catch_at);
      expect_sep("(");
      SourcePos param_at = pos();
      std::vector<NodeId> annotations = parse_modifiers();
      NodeId param = b_.make(NodeKind::Param, param_at);
      for (NodeId a : annotations) b_.add(param, a);
      SourcePos type_at = pos();
      std::string types;
      std::size_t save = p_;
      if (!scan_type(types)) {
        p_ = save;
        fail("exception type");
      }
      while (accept_op("|")) {
        types += "|";
        if (!scan_type(types)) fail("exception type");
      }
      b_.add(param, b_.leaf(NodeKind::TypeRef, std::move(types), type_at, NameRole::Type));
      const Token& name = expect_ident();
      b_.add(param, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
      expect_sep(")");
      b_.add(c, param);
      b_.add(c, parse_block(anonymous_depth));
      b_.add(s, c);
    }
    if (accept_kw("finally")) {
      handled = true;
      b_.add(s, parse_block(anonymous_depth));
    }
    if (!handled && b_.nodes[s].children.size() == 1) fail("'catch' or 'finally'");
    return s;
  }

  // ---- expressions ---------------------------------------------------------

  std::optional<std::string> peek_assign_op() const {
    if (at_end() || peek().kind != TokenKind::Operator) return std::nullopt;
    if (peek().text == ">") {
      // `>>=` / `>>>=` arrive split into single characters.
      std::string op = ">";
      std::size_t k = 1;
      while (glued(k) && peek(k).is_op(">") && op.size() < 3) {
        op += ">";
        ++k;
      }
      if (op.size() >= 2 && glued(k) && peek(k).is_op("=")) return op + "=";
      return std::nullopt;
    }
    if (is_assign_op(peek().text)) return peek().text;
    return std::nullopt;
  }

  void consume_op_text(const std::string& op) {
    if (peek().text == op) {
      take();
      return;
    }
    std::size_t consumed = 0;
    while (consumed < op.size()) consumed += take().text.size();
  }

  NodeId parse_expression(int anonymous_depth = 0) {
    DepthGuard guard(*this);
    if (is_lambda_start()) return parse_lambda(anonymous_depth);
    NodeId lhs = parse_ternary(anonymous_depth);
    if (auto op = peek_assign_op()) {
      SourcePos at = pos();
      consume_op_text(*op);
      NodeId assign = b_.make(NodeKind::Assign, at);
      b_.add(assign, lhs);
      if (*op != "=") b_.add(assign, b_.leaf(NodeKind::BinaryOp, *op, at));
      b_.add(assign, check_sep("{") ? parse_array_init() : parse_expression(anonymous_depth));
      return assign;
    }
    return lhs;
  }

  bool is_lambda_start() const {
    if (check_ident() && check_op("->", 1)) return true;
    if (!check_sep("(")) return false;
    int depth = 0;
    for (std::size_t k = 0; p_ + k < toks_.size(); ++k) {
      const Token& t = peek(k);
      if (t.is_sep("(")) {
        ++depth;
      } else if (t.is_sep(")")) {
        if (--depth == 0) return check_op("->", k + 1);
      } else if (t.is_sep(";") || t.is_sep("{") || t.is_sep("}")) {
        return false;
      }
    }
    return false;
  }

  NodeId parse_lambda(int anonymous_depth) {
    SourcePos at = pos();
    NodeId lam = b_.make(NodeKind::Lambda, at);
    if (check_ident()) {
      const Token& name = take();
      NodeId param = b_.make(NodeKind::Param, name.pos);
      b_.add(param, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
      b_.add(lam, param);
    } else {
      expect_sep("(");
      if (!check_sep(")")) {
        do {
          if (check_ident() && (check_sep(",", 1) || check_sep(")", 1))) {
            const Token& name = take();
            NodeId param = b_.make(NodeKind::Param, name.pos);
            b_.add(param, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
            b_.add(lam, param);
          } else {
            b_.add(lam, parse_formal_param());
          }
        } while (accept_sep(","));
      }
      expect_sep(")");
    }
    expect_op("->");
    NodeId body = check_sep("{") ? parse_block(anonymous_depth) : parse_expression(anonymous_depth);
    b_.set_role(body, Role::Body);
    b_.add(lam, body);
    return lam;
  }

  NodeId parse_ternary(int anonymous_depth) {
    NodeId cond = parse_binary(1, anonymous_depth);
    if (!check_op("?")) return cond;
    SourcePos at = pos();
    take();
    NodeId t = b_.make(NodeKind::Conditional, at);
    b_.add(t, cond);
    b_.add(t, is_lambda_start() ? parse_lambda(anonymous_depth) : parse_ternary(anonymous_depth));
    expect_op(":");
    b_.add(t, is_lambda_start() ? parse_lambda(anonymous_depth) : parse_ternary(anonymous_depth));
    return t;
  }

  // Binary operator at the cursor, gluing split `>` characters back into
  // shifts. Returns the operator text and how many tokens it spans.
  std::optional<std::pair<std::string, std::size_t>> peek_binary_op() const {
    if (at_end()) return std::nullopt;
    const Token& t = peek();
    if (t.is_kw("instanceof")) return std::make_pair(std::string("instanceof"), std::size_t{1});
    if (t.kind != TokenKind::Operator) return std::nullopt;
    if (t.text == ">") {
      std::string op = ">";
      std::size_t k = 1;
      while (glued(k) && peek(k).is_op(">") && op.size() < 3) {
        op += ">";
        ++k;
      }
      if (glued(k) && peek(k).is_op("=")) {
        if (op.size() == 1) return std::make_pair(std::string(">="), k + 1);
        return std::nullopt;  // compound shift assignment
      }
      return std::make_pair(op, k);
    }
    if (binary_precedence(t.text) > 0) return std::make_pair(t.text, std::size_t{1});
    return std::nullopt;
  }

  NodeId parse_binary(int min_prec, int anonymous_depth) {
    DepthGuard guard(*this);
    NodeId lhs = parse_unary(anonymous_depth);
    while (true) {
      auto op = peek_binary_op();
      if (!op) break;
      int prec = binary_precedence(op->first);
      if (prec < min_prec) break;
      SourcePos at = pos();
      p_ += op->second;
      if (op->first == "instanceof") {
        NodeId inst = b_.make(NodeKind::InstanceOf, at);
        b_.add(inst, lhs);
        accept_kw("final");
        b_.add(inst, parse_type_ref());
        if (check_ident()) {
          const Token& name = take();
          b_.add(inst, b_.leaf(NodeKind::Name, name.text, name.pos, NameRole::Declarator));
        }
        lhs = inst;
        continue;
      }
      NodeId rhs = parse_binary(prec + 1, anonymous_depth);
      NodeId bin = b_.make(NodeKind::BinaryOp, at);
      b_.add(bin, lhs);
      b_.add(bin, b_.leaf(NodeKind::BinaryOp, op->first, at));
      b_.add(bin, rhs);
      lhs = bin;
    }
    return lhs;
  }

  bool is_cast_ahead(bool& primitive) {
    // cursor is on '('
    std::size_t save = p_;
    std::size_t nodes_before = b_.nodes.size();
    take();
    primitive = is_primitive(peek());
    std::string text;
    bool ok = scan_type(text) && check_sep(")");
    while (ok && accept_op("&")) ok = scan_type(text) && check_sep(")");
    if (ok) {
      take();
      if (primitive && text.find('[') == std::string::npos) {
        ok = !at_end() && !check_sep(")") && !check_sep(";") && !check_sep(",");
      } else {
        const Token& n = peek();
        ok = !at_end() &&
             (n.kind == TokenKind::Identifier || n.kind == TokenKind::Literal || n.is_sep("(") ||
              n.is_op("!") || n.is_op("~") || n.is_kw("this") || n.is_kw("super") ||
              n.is_kw("new") || is_primitive(n));
      }
    }
    p_ = save;
    b_.nodes.resize(nodes_before);
    return ok;
  }

  NodeId parse_unary(int anonymous_depth) {
    DepthGuard guard(*this);
    SourcePos at = pos();
    if (check_op("+") || check_op("-") || check_op("++") || check_op("--") || check_op("!") ||
        check_op("~")) {
      std::string op = take().text;
      NodeId u = b_.make(NodeKind::UnaryOp, at);
      b_.add(u, b_.leaf(NodeKind::UnaryOp, std::move(op), at));
      b_.add(u, parse_unary(anonymous_depth));
      return u;
    }
    bool primitive = false;
    if (check_sep("(") && !is_lambda_start() && is_cast_ahead(primitive)) {
      take();
      NodeId cast = b_.make(NodeKind::Cast, at);
      std::string text;
      SourcePos type_at = pos();
      scan_type(text);
      while (accept_op("&")) {
        text += " & ";
        scan_type(text);
      }
      b_.add(cast, b_.leaf(NodeKind::TypeRef, std::move(text), type_at, NameRole::Type));
      expect_sep(")");
      b_.add(cast, is_lambda_start() ? parse_lambda(anonymous_depth) : parse_unary(anonymous_depth));
      return cast;
    }
    NodeId e = parse_postfix(parse_primary(anonymous_depth), anonymous_depth);
    while (check_op("++") || check_op("--")) {
      SourcePos op_at = pos();
      NodeId u = b_.make(NodeKind::UnaryOp, op_at);
      b_.add(u, e);
      b_.add(u, b_.leaf(NodeKind::UnaryOp, take().text, op_at));
      e = u;
    }
    return e;
  }

  void parse_arguments(NodeId call, int anonymous_depth) {
    expect_sep("(");
    if (!check_sep(")")) {
      do {
        b_.add(call, parse_expression(anonymous_depth));
      } while (accept_sep(","));
    }
    expect_sep(")");
  }

  NodeId parse_postfix(NodeId e, int anonymous_depth) {
    while (true) {
      SourcePos at = pos();
      if (accept_sep(".")) {
        std::optional<NodeId> type_args;
        if (check_op("<")) {
          SourcePos ta = pos();
          std::string text;
          if (!scan_type_args(text)) fail("type arguments");
          type_args = b_.leaf(NodeKind::TypeRef, std::move(text), ta, NameRole::Type);
        }
        if (check_kw("new")) fail("member (qualified inner class creation is not supported)");
        const Token& t = peek();
        if (!(t.kind == TokenKind::Identifier || t.is_kw("class") || t.is_kw("this") ||
              t.is_kw("super"))) {
          fail("member name");
        }
        take();
        if (check_sep("(")) {
          NodeId call = b_.make(NodeKind::MethodCall, at);
          b_.add(call, e);
          if (type_args) b_.add(call, *type_args);
          b_.add(call, b_.leaf(NodeKind::Name, t.text, t.pos, NameRole::Method));
          parse_arguments(call, anonymous_depth);
          e = call;
        } else {
          if (type_args) fail("'('");
          NodeId fa = b_.make(NodeKind::FieldAccess, at);
          b_.add(fa, e);
          b_.add(fa, b_.leaf(NodeKind::Name, t.text, t.pos, NameRole::Member));
          e = fa;
        }
      } else if (accept_sep("[")) {
        NodeId acc = b_.make(NodeKind::ArrayAccess, at);
        b_.add(acc, e);
        b_.add(acc, parse_expression(anonymous_depth));
        expect_sep("]");
        e = acc;
      } else if (accept_sep("::")) {
        NodeId fa = b_.make(NodeKind::FieldAccess, at);
        b_.add(fa, e);
        SourcePos name_at = pos();
        if (check_kw("new")) {
          take();
          b_.add(fa, b_.leaf(NodeKind::Name, "new", name_at, NameRole::Method));
        } else {
          b_.add(fa, b_.leaf(NodeKind::Name, expect_ident().text, name_at, NameRole::Method));
        }
        e = fa;
      } else {
        return e;
      }
    }
  }

  NodeId parse_array_init() {
    DepthGuard guard(*this);
    SourcePos at = pos();
    expect_sep("{");
    NodeId init = b_.make(NodeKind::ArrayInit, at);
    while (!accept_sep("}")) {
      b_.add(init, check_sep("{") ? parse_array_init() : parse_expression());
      if (!accept_sep(",")) {
        expect_sep("}");
        break;
      }
    }
    return init;
  }

  NodeId parse_creator(SourcePos at, int anonymous_depth) {
    NodeId call = b_.make(NodeKind::ConstructorCall, at);
    SourcePos type_at = pos();
    std::string text;
    if (is_primitive(peek())) {
      text = take().text;
    } else {
      if (!check_ident()) fail("type after 'new'");
      text = take().text;
      while (true) {
        if (check_op("<") && !scan_type_args(text)) fail("type arguments");
        if (check_sep(".") && check_ident(1)) {
          take();
          text += "." + take().text;
          continue;
        }
        break;
      }
    }
    if (check_sep("[")) {
      std::vector<NodeId> dims;
      while (accept_sep("[")) {
        text += "[]";
        if (!check_sep("]")) dims.push_back(parse_expression(anonymous_depth));
        expect_sep("]");
      }
      b_.add(call, b_.leaf(NodeKind::TypeRef, std::move(text), type_at, NameRole::Type));
      for (NodeId d : dims) b_.add(call, d);
      if (check_sep("{")) b_.add(call, parse_array_init());
      return call;
    }
    b_.add(call, b_.leaf(NodeKind::TypeRef, std::move(text), type_at, NameRole::Type));
    parse_arguments(call, anonymous_depth);
    if (check_sep("{")) {
      if (anonymous_depth >= 1) fail("expression (nested anonymous classes are not supported)");
      NodeId body = b_.make(NodeKind::ClassDecl, pos());
      parse_class_body(body, std::string(), /*is_enum=*/false, anonymous_depth + 1);
      b_.add(call, body);
    }
    return call;
  }

  NodeId parse_primary(int anonymous_depth) {
    DepthGuard guard(*this);
    SourcePos at = pos();
    if (at_end()) fail("expression");
    const Token& t = peek();
    if (t.kind == TokenKind::Literal) {
      take();
      return b_.leaf(NodeKind::Literal, t.text, t.pos);
    }
    if (t.is_sep("(")) {
      take();
      NodeId inner = parse_expression(anonymous_depth);
      expect_sep(")");
      return inner;
    }
    if (t.is_kw("new")) {
      take();
      return parse_creator(at, anonymous_depth);
    }
    if (t.is_kw("this") || t.is_kw("super")) {
      take();
      if (check_sep("(")) {
        NodeId call = b_.make(NodeKind::MethodCall, at);
        b_.add(call, b_.leaf(NodeKind::Name, t.text, t.pos, NameRole::Method));
        parse_arguments(call, anonymous_depth);
        return call;
      }
      return b_.leaf(NodeKind::Name, t.text, t.pos);
    }
    if (t.is_kw("switch")) fail("expression (switch expressions are not supported)");
    if (is_primitive(t)) {
      // int.class, int[].class
      std::string text;
      std::size_t save = p_;
      if (scan_type(text) && check_sep(".") && check_kw("class", 1)) {
        NodeId fa = b_.make(NodeKind::FieldAccess, at);
        b_.add(fa, b_.leaf(NodeKind::TypeRef, std::move(text), at, NameRole::Type));
        take();
        b_.add(fa, b_.leaf(NodeKind::Name, take().text, at, NameRole::Member));
        return fa;
      }
      p_ = save;
      fail("expression");
    }
    if (t.kind == TokenKind::Identifier) {
      take();
      if (check_sep("(")) {
        NodeId call = b_.make(NodeKind::MethodCall, at);
        b_.add(call, b_.leaf(NodeKind::Name, t.text, t.pos, NameRole::Method));
        parse_arguments(call, anonymous_depth);
        return call;
      }
      // Type[].class
      if (check_sep("[") && check_sep("]", 1)) {
        std::string text = t.text;
        while (check_sep("[") && check_sep("]", 1)) {
          p_ += 2;
          text += "[]";
        }
        if (!(check_sep(".") && check_kw("class", 1))) fail("'.class'");
        NodeId fa = b_.make(NodeKind::FieldAccess, at);
        b_.add(fa, b_.leaf(NodeKind::TypeRef, std::move(text), at, NameRole::Type));
        take();
        b_.add(fa, b_.leaf(NodeKind::Name, take().text, at, NameRole::Member));
        return fa;
      }
      return b_.leaf(NodeKind::Name, t.text, t.pos, NameRole::Variable);
    }
    fail("expression");
  }

  // ---- finishing -----------------------------------------------------------

  // Renumbers nodes into pre-order so ids follow source order.
  Ast finish(NodeId root) {
    std::vector<NodeId> order;
    order.reserve(b_.nodes.size());
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      order.push_back(id);
      const auto& kids = b_.nodes[id].children;
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    std::vector<NodeId> remap(b_.nodes.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<NodeId>(i);

    Ast ast;
    ast.source_path = path_;
    ast.root = 0;
    ast.nodes.reserve(order.size());
    for (NodeId old : order) {
      AstNode n = std::move(b_.nodes[old]);
      n.id = remap[old];
      for (NodeId& c : n.children) c = remap[c];
      ast.nodes.push_back(std::move(n));
    }
    return ast;
  }

  std::vector<Token> toks_;
  std::vector<bool> glued_;
  std::string path_;
  std::size_t p_ = 0;
  int depth_ = 0;
  Builder b_;
};

}  // namespace

ParseError::ParseError(SourcePos pos, std::string expected, std::string found)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                         ": expected " + expected + ", found " + found),
      pos_(pos),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Ast parse(std::span<const Token> tokens, std::string source_path) {
  return Parser(tokens, std::move(source_path)).run();
}

Ast parse_source(std::string_view source, std::string source_path) {
  std::vector<Token> tokens = lex(source);
  return parse(tokens, std::move(source_path));
}

std::variant<Ast, FileFailure> parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return FileFailure{path.string(), "cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_source(buf.str(), path.string());
  } catch (const LexError& e) {
    return FileFailure{path.string(), std::string("lex error: ") + e.what()};
  } catch (const ParseError& e) {
    return FileFailure{path.string(), std::string("parse error: ") + e.what()};
  }
}

}  // namespace tepgnn::java
