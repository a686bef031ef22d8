#include "tepgnn/java/ast_dump.hpp"

#include <sstream>

namespace tepgnn::java {

namespace {

void dump_text(const Ast& ast, NodeId id, int depth, std::ostringstream& out) {
  const AstNode& n = ast.node(id);
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(n.kind);
  if (n.value) out << ' ' << nlohmann::json(*n.value).dump();
  out << '\n';
  for (NodeId c : n.children) dump_text(ast, c, depth + 1, out);
}

nlohmann::json dump_json(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  nlohmann::json j;
  j["kind"] = std::string(to_string(n.kind));
  if (n.value) j["value"] = *n.value;
  j["line"] = n.pos.line;
  j["column"] = n.pos.column;
  j["children"] = nlohmann::json::array();
  for (NodeId c : n.children) j["children"].push_back(dump_json(ast, c));
  return j;
}

}  // namespace

std::string to_text(const Ast& ast) {
  std::ostringstream out;
  if (!ast.nodes.empty()) dump_text(ast, ast.root, 0, out);
  return out.str();
}

nlohmann::json to_json(const Ast& ast) {
  nlohmann::json j;
  j["source_path"] = ast.source_path;
  j["root"] = ast.nodes.empty() ? nlohmann::json() : dump_json(ast, ast.root);
  return j;
}

}  // namespace tepgnn::java
