#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tepgnn/java/token.hpp"

namespace tepgnn::java {

// Grammar node kinds. The first 28 entries are the core test-file grammar;
// the tail covers statement forms that real JUnit files use constantly
// (try/catch, throw, break, ternaries) so those files do not fail to parse.
enum class NodeKind : std::uint8_t {
  CompilationUnit,
  ClassDecl,
  FieldDecl,
  MethodDecl,
  Annotation,
  Param,
  Block,
  IfStmt,
  WhileStmt,
  ForStmt,
  DoWhileStmt,
  SwitchStmt,
  ReturnStmt,
  ExprStmt,
  LocalVarDecl,
  Assign,
  MethodCall,
  ConstructorCall,
  FieldAccess,
  Name,
  Literal,
  BinaryOp,
  UnaryOp,
  ArrayAccess,
  ArrayInit,
  Cast,
  Lambda,
  TypeRef,
  SwitchCase,
  TryStmt,
  CatchClause,
  ThrowStmt,
  BreakStmt,
  ContinueStmt,
  Conditional,
  InstanceOf,
  SyncStmt,
  AssertStmt,
};

inline constexpr std::size_t kNodeKindCount = static_cast<std::size_t>(NodeKind::AssertStmt) + 1;

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view name);

bool is_statement(NodeKind kind);
/// Kinds allowed to carry a token value on a terminal.
bool carries_value(NodeKind kind);

// Slot a node occupies inside its control-flow parent. Used by the flow
// builder to find conditions and bodies; never serialized.
enum class Role : std::uint8_t { None, Condition, Then, Else, Body, Init, Update };

// What a Name/TypeRef terminal denotes. Only Declarator and Variable names
// take part in next-use chains.
enum class NameRole : std::uint8_t {
  None,
  Declarator,  // introduced by a field, local, parameter or pattern
  Variable,    // simple name used as an expression
  Method,
  Member,      // name after a dot
  Type,
};

using NodeId = std::uint32_t;

struct AstNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::CompilationUnit;
  std::optional<std::string> value;
  std::vector<NodeId> children;
  Role role = Role::None;
  NameRole name_role = NameRole::None;
  SourcePos pos;  // diagnostics only

  bool is_terminal() const { return children.empty(); }
};

struct Ast {
  NodeId root = 0;
  std::vector<AstNode> nodes;
  std::string source_path;

  const AstNode& node(NodeId id) const { return nodes.at(id); }
  std::size_t size() const { return nodes.size(); }

  /// Node ids in depth-first pre-order (source order).
  std::vector<NodeId> preorder() const;
  /// Terminal node ids in pre-order.
  std::vector<NodeId> terminals() const;
};

std::vector<NodeId> parent_table(const Ast& ast);

}  // namespace tepgnn::java
