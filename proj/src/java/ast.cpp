#include "tepgnn/java/ast.hpp"

#include <array>
#include <limits>

namespace tepgnn::java {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {
    "CompilationUnit", "ClassDecl",    "FieldDecl",    "MethodDecl",   "Annotation",
    "Param",           "Block",        "IfStmt",       "WhileStmt",    "ForStmt",
    "DoWhileStmt",     "SwitchStmt",   "ReturnStmt",   "ExprStmt",     "LocalVarDecl",
    "Assign",          "MethodCall",   "ConstructorCall", "FieldAccess", "Name",
    "Literal",         "BinaryOp",     "UnaryOp",      "ArrayAccess",  "ArrayInit",
    "Cast",            "Lambda",       "TypeRef",      "SwitchCase",   "TryStmt",
    "CatchClause",     "ThrowStmt",    "BreakStmt",    "ContinueStmt", "Conditional",
    "InstanceOf",      "SyncStmt",     "AssertStmt",
};

}  // namespace

std::string_view to_string(NodeKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<NodeKind> node_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

bool is_statement(NodeKind kind) {
  switch (kind) {
    case NodeKind::Block:
    case NodeKind::IfStmt:
    case NodeKind::WhileStmt:
    case NodeKind::ForStmt:
    case NodeKind::DoWhileStmt:
    case NodeKind::SwitchStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::ExprStmt:
    case NodeKind::LocalVarDecl:
    case NodeKind::TryStmt:
    case NodeKind::ThrowStmt:
    case NodeKind::BreakStmt:
    case NodeKind::ContinueStmt:
    case NodeKind::SyncStmt:
    case NodeKind::AssertStmt:
      return true;
    default:
      return false;
  }
}

bool carries_value(NodeKind kind) {
  return kind == NodeKind::Name || kind == NodeKind::Literal || kind == NodeKind::TypeRef ||
         kind == NodeKind::BinaryOp || kind == NodeKind::UnaryOp;
}

std::vector<NodeId> Ast::preorder() const {
  std::vector<NodeId> order;
  if (nodes.empty()) return order;
  order.reserve(nodes.size());
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const auto& kids = nodes[id].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<NodeId> Ast::terminals() const {
  std::vector<NodeId> out;
  for (NodeId id : preorder()) {
    if (nodes[id].is_terminal()) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> parent_table(const Ast& ast) {
  std::vector<NodeId> parent(ast.size(), std::numeric_limits<NodeId>::max());
  for (const auto& n : ast.nodes) {
    for (NodeId c : n.children) parent[c] = n.id;
  }
  return parent;
}

}  // namespace tepgnn::java
