#include "tepgnn/faast/graph.hpp"

#include <algorithm>
#include <tuple>

namespace tepgnn::faast {

namespace {
constexpr std::array<std::string_view, kEdgeKindCount> kEdgeNames = {
    "AstChild", "AstParent", "NextToken", "NextSibling", "NextUse",
    "IfFlow",   "ElseFlow",  "WhileFlow", "ForFlow",     "NextStatement",
};
}  // namespace

std::string_view to_string(EdgeKind kind) { return kEdgeNames.at(tag(kind)); }

std::optional<EdgeKind> edge_kind_from_tag(std::uint32_t t) {
  if (t >= kEdgeKindCount) return std::nullopt;
  return static_cast<EdgeKind>(t);
}

bool canonical_less(const Edge& a, const Edge& b) {
  return std::make_tuple(tag(a.kind), a.src, a.dst) < std::make_tuple(tag(b.kind), b.src, b.dst);
}

std::array<std::size_t, kEdgeKindCount> FaAstGraph::edge_histogram() const {
  std::array<std::size_t, kEdgeKindCount> h{};
  for (const Edge& e : edges) ++h[tag(e.kind)];
  return h;
}

std::size_t FaAstGraph::count_kind(java::NodeKind kind) const {
  return static_cast<std::size_t>(std::count(node_kinds.begin(), node_kinds.end(), kind));
}

}  // namespace tepgnn::faast
