#include "tepgnn/faast/invariants.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace tepgnn::faast {

using java::NodeKind;

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

std::string at(std::uint32_t id, NodeKind kind) {
  return std::string(java::to_string(kind)) + "#" + std::to_string(id);
}

}  // namespace

std::vector<std::string> check_invariants(const FaAstGraph& g) {
  std::vector<std::string> bad;
  const std::uint32_t n = g.num_nodes;
  if (g.node_kinds.size() != n || g.node_values.size() != n) {
    bad.push_back("node table length differs from num_nodes");
    return bad;
  }
  for (const Edge& e : g.edges) {
    if (e.src >= n || e.dst >= n) {
      bad.push_back("edge endpoint out of range");
      return bad;
    }
  }
  if (n == 0) return bad;

  std::map<EdgeKind, std::multiset<Pair>> by_kind;
  for (const Edge& e : g.edges) by_kind[e.kind].insert({e.src, e.dst});
  auto count = [&](EdgeKind k, std::uint32_t s, std::uint32_t d) {
    return by_kind[k].count({s, d});
  };

  // Tree: n-1 AstChild edges, one parent per non-root node, mirrored by AstParent.
  std::vector<std::vector<std::uint32_t>> children(n);
  std::vector<int> parents(n, 0);
  for (const auto& [s, d] : by_kind[EdgeKind::AstChild]) {
    children[s].push_back(d);
    ++parents[d];
    if (count(EdgeKind::AstParent, d, s) != 1) {
      bad.push_back("AstChild " + std::to_string(s) + "->" + std::to_string(d) +
                    " lacks exactly one AstParent mirror");
    }
  }
  if (by_kind[EdgeKind::AstParent].size() != by_kind[EdgeKind::AstChild].size()) {
    bad.push_back("AstParent count differs from AstChild count");
  }
  if (by_kind[EdgeKind::AstChild].size() != n - 1) {
    bad.push_back("tree has " + std::to_string(by_kind[EdgeKind::AstChild].size()) +
                  " child edges for " + std::to_string(n) + " nodes");
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if ((v == 0 && parents[v] != 0) || (v != 0 && parents[v] != 1)) {
      bad.push_back(at(v, g.node_kinds[v]) + " has " + std::to_string(parents[v]) + " parents");
    }
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  // Pre-order over the recovered tree; a cycle or disconnected node shows up
  // as a visit count other than n.
  std::vector<std::uint32_t> order;
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty() && order.size() <= n) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    if (seen[v]) {
      bad.push_back("tree revisits node " + std::to_string(v));
      break;
    }
    seen[v] = 1;
    order.push_back(v);
    for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
  }
  if (order.size() != n) bad.push_back("tree does not reach every node from the root");

  // Values only on terminals of value-carrying kinds.
  for (std::uint32_t v = 0; v < n; ++v) {
    if (g.node_values[v] && (!children[v].empty() || !java::carries_value(g.node_kinds[v]))) {
      bad.push_back(at(v, g.node_kinds[v]) + " carries a value but may not");
    }
  }

  // NextToken: one path over the terminals in pre-order.
  std::vector<std::uint32_t> terminals;
  for (std::uint32_t v : order) {
    if (children[v].empty()) terminals.push_back(v);
  }
  std::multiset<Pair> expected_tokens;
  for (std::size_t i = 1; i < terminals.size(); ++i) {
    expected_tokens.insert({terminals[i - 1], terminals[i]});
  }
  if (by_kind[EdgeKind::NextToken] != expected_tokens) {
    bad.push_back("NextToken edges do not form the terminal path (" +
                  std::to_string(by_kind[EdgeKind::NextToken].size()) + " edges, " +
                  std::to_string(terminals.size()) + " terminals)");
  }

  // NextSibling: consecutive children of every node.
  std::multiset<Pair> expected_siblings;
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::size_t i = 1; i < children[v].size(); ++i) {
      expected_siblings.insert({children[v][i - 1], children[v][i]});
    }
  }
  if (by_kind[EdgeKind::NextSibling] != expected_siblings) {
    bad.push_back("NextSibling edges do not match consecutive children");
  }

  // Per-construct control flow.
  std::multiset<Pair> expected_statements;
  std::size_t ifs = 0, elses = 0, whiles = 0, fors = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& c = children[v];
    switch (g.node_kinds[v]) {
      case NodeKind::IfStmt:
        ++ifs;
        if (c.size() < 2 || count(EdgeKind::IfFlow, c[0], c[1]) != 1) {
          bad.push_back(at(v, NodeKind::IfStmt) + " lacks its IfFlow edge");
        }
        if (c.size() == 3) {
          ++elses;
          if (count(EdgeKind::ElseFlow, c[0], c[2]) != 1) {
            bad.push_back(at(v, NodeKind::IfStmt) + " lacks its ElseFlow edge");
          }
        }
        break;
      case NodeKind::WhileStmt:
        ++whiles;
        if (c.size() != 2 || count(EdgeKind::WhileFlow, c[0], c[1]) != 1 ||
            count(EdgeKind::NextUse, c[1], c[0]) < 1) {
          bad.push_back(at(v, NodeKind::WhileStmt) + " lacks WhileFlow/back-edge pair");
        }
        break;
      case NodeKind::ForStmt: {
        ++fors;
        if (c.empty()) {
          bad.push_back(at(v, NodeKind::ForStmt) + " has no body");
          break;
        }
        const std::uint32_t body = c.back();
        std::size_t found = 0;
        std::vector<std::uint32_t> sources = c;
        sources.push_back(v);
        for (std::uint32_t s : sources) {
          if (count(EdgeKind::ForFlow, s, body) == 1 && count(EdgeKind::NextUse, body, s) >= 1) ++found;
        }
        if (found != 1) bad.push_back(at(v, NodeKind::ForStmt) + " lacks ForFlow/back-edge pair");
        break;
      }
      case NodeKind::Block:
        for (std::size_t i = 1; i < c.size(); ++i) expected_statements.insert({c[i - 1], c[i]});
        break;
      default:
        break;
    }
  }
  auto total = [&](EdgeKind k) { return by_kind[k].size(); };
  if (total(EdgeKind::IfFlow) != ifs) bad.push_back("IfFlow count differs from IfStmt count");
  if (total(EdgeKind::ElseFlow) != elses) bad.push_back("ElseFlow count differs from else branches");
  if (total(EdgeKind::WhileFlow) != whiles) bad.push_back("WhileFlow count differs from WhileStmt count");
  if (total(EdgeKind::ForFlow) != fors) bad.push_back("ForFlow count differs from ForStmt count");
  if (by_kind[EdgeKind::NextStatement] != expected_statements) {
    bad.push_back("NextStatement edges do not match consecutive Block statements");
  }
  return bad;
}

}  // namespace tepgnn::faast
