#include "tepgnn/faast/builder.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace tepgnn::faast {

using java::Ast;
using java::AstNode;
using java::NameRole;
using java::NodeId;
using java::NodeKind;
using java::Role;

namespace {

std::optional<NodeId> child_with_role(const Ast& ast, NodeId id, Role role) {
  for (NodeId c : ast.node(id).children) {
    if (ast.node(c).role == role) return c;
  }
  return std::nullopt;
}

bool opens_scope(NodeKind kind) {
  switch (kind) {
    case NodeKind::Block:
    case NodeKind::ForStmt:
    case NodeKind::Lambda:
    case NodeKind::CatchClause:
    case NodeKind::TryStmt:
    case NodeKind::SwitchStmt:
    case NodeKind::MethodDecl:
      return true;
    default:
      return false;
  }
}

// Walks one chain region (a method body, or a class body outside its
// methods) in textual order and records next-use edges.
class UseChains {
 public:
  UseChains(const Ast& ast, std::vector<Edge>& out) : ast_(ast), out_(out) {}

  void run_region(NodeId start, const std::map<std::string, NodeId>& inherited, bool include_start) {
    scopes_.clear();
    scopes_.push_back(inherited);
    region_start_ = start;
    if (include_start) {
      visit(start);
    } else {
      for (NodeId c : ast_.node(start).children) visit(c);
    }
  }

 private:
  void visit(NodeId id) {
    const AstNode& n = ast_.node(id);
    // Nested classes and methods are regions of their own.
    if (n.kind == NodeKind::ClassDecl) return;
    if (n.kind == NodeKind::MethodDecl && id != region_start_) return;

    if (n.kind == NodeKind::Name && n.value) {
      if (n.name_role == NameRole::Declarator) {
        scopes_.back()[*n.value] = id;
      } else if (n.name_role == NameRole::Variable) {
        use(*n.value, id);
      }
      return;
    }
    const bool scoped = opens_scope(n.kind);
    if (scoped) scopes_.emplace_back();
    for (NodeId c : n.children) visit(c);
    if (scoped) scopes_.pop_back();
  }

  void use(const std::string& name, NodeId id) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) {
        out_.push_back(Edge{found->second, id, EdgeKind::NextUse});
        found->second = id;
        return;
      }
    }
    scopes_.front()[name] = id;
  }

  const Ast& ast_;
  std::vector<Edge>& out_;
  std::vector<std::map<std::string, NodeId>> scopes_;
  NodeId region_start_ = 0;
};

void collect_classes(const Ast& ast, NodeId id, std::vector<NodeId>& classes) {
  if (ast.node(id).kind == NodeKind::ClassDecl) classes.push_back(id);
  for (NodeId c : ast.node(id).children) collect_classes(ast, c, classes);
}

}  // namespace

std::vector<Edge> add_tree_edges(const Ast& ast) {
  std::vector<Edge> edges;
  for (const AstNode& n : ast.nodes) {
    for (NodeId c : n.children) {
      edges.push_back(Edge{n.id, c, EdgeKind::AstChild});
      edges.push_back(Edge{c, n.id, EdgeKind::AstParent});
    }
  }
  return edges;
}

std::vector<Edge> add_next_token_edges(const Ast& ast) {
  std::vector<Edge> edges;
  std::vector<NodeId> terminals = ast.terminals();
  for (std::size_t i = 1; i < terminals.size(); ++i) {
    edges.push_back(Edge{terminals[i - 1], terminals[i], EdgeKind::NextToken});
  }
  return edges;
}

std::vector<Edge> add_next_sibling_edges(const Ast& ast) {
  std::vector<Edge> edges;
  for (const AstNode& n : ast.nodes) {
    for (std::size_t i = 1; i < n.children.size(); ++i) {
      edges.push_back(Edge{n.children[i - 1], n.children[i], EdgeKind::NextSibling});
    }
  }
  return edges;
}

std::vector<Edge> add_next_use_edges(const Ast& ast) {
  std::vector<Edge> edges;
  if (ast.nodes.empty()) return edges;
  std::vector<NodeId> classes;
  collect_classes(ast, ast.root, classes);
  UseChains chains(ast, edges);
  for (NodeId cls : classes) {
    std::map<std::string, NodeId> fields;
    for (NodeId member : ast.node(cls).children) {
      if (ast.node(member).kind != NodeKind::FieldDecl) continue;
      for (NodeId c : ast.node(member).children) {
        const AstNode& n = ast.node(c);
        if (n.kind == NodeKind::Name && n.name_role == NameRole::Declarator) fields[*n.value] = c;
      }
    }
    // Class body outside methods: field initializers and initializer blocks.
    chains.run_region(cls, {}, /*include_start=*/false);
    for (NodeId member : ast.node(cls).children) {
      if (ast.node(member).kind == NodeKind::MethodDecl) {
        chains.run_region(member, fields, /*include_start=*/true);
      }
    }
  }
  return edges;
}

std::vector<Edge> add_control_flow_edges(const Ast& ast) {
  std::vector<Edge> edges;
  for (const AstNode& n : ast.nodes) {
    switch (n.kind) {
      case NodeKind::IfStmt: {
        auto cond = child_with_role(ast, n.id, Role::Condition);
        auto then = child_with_role(ast, n.id, Role::Then);
        if (cond && then) edges.push_back(Edge{*cond, *then, EdgeKind::IfFlow});
        auto otherwise = child_with_role(ast, n.id, Role::Else);
        if (cond && otherwise) edges.push_back(Edge{*cond, *otherwise, EdgeKind::ElseFlow});
        break;
      }
      case NodeKind::WhileStmt:
      case NodeKind::ForStmt: {
        const EdgeKind flow = n.kind == NodeKind::WhileStmt ? EdgeKind::WhileFlow : EdgeKind::ForFlow;
        NodeId cond = child_with_role(ast, n.id, Role::Condition).value_or(n.id);
        auto body = child_with_role(ast, n.id, Role::Body);
        if (body) {
          edges.push_back(Edge{cond, *body, flow});
          edges.push_back(Edge{*body, cond, EdgeKind::NextUse});
        }
        break;
      }
      case NodeKind::Block:
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          edges.push_back(Edge{n.children[i - 1], n.children[i], EdgeKind::NextStatement});
        }
        break;
      default:
        break;
    }
  }
  return edges;
}

FaAstGraph build_fa_ast(const Ast& ast) {
  FaAstGraph g;
  g.num_nodes = static_cast<std::uint32_t>(ast.size());
  g.source_path = ast.source_path;
  g.node_kinds.reserve(ast.size());
  g.node_values.reserve(ast.size());
  for (const AstNode& n : ast.nodes) {
    g.node_kinds.push_back(n.kind);
    g.node_values.push_back(n.value);
  }
  for (auto pass : {add_tree_edges, add_next_token_edges, add_next_sibling_edges,
                    add_next_use_edges, add_control_flow_edges}) {
    std::vector<Edge> part = pass(ast);
    g.edges.insert(g.edges.end(), part.begin(), part.end());
  }
  std::sort(g.edges.begin(), g.edges.end(), canonical_less);
  return g;
}

}  // namespace tepgnn::faast
