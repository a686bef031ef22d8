#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tepgnn/java/ast.hpp"

namespace tepgnn::faast {

// Serialized tag = underlying value; the order is part of the file formats.
enum class EdgeKind : std::uint8_t {
  AstChild,
  AstParent,
  NextToken,
  NextSibling,
  NextUse,
  IfFlow,
  ElseFlow,
  WhileFlow,
  ForFlow,
  NextStatement,
};

inline constexpr std::size_t kEdgeKindCount = 10;

std::string_view to_string(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from_tag(std::uint32_t tag);
inline std::uint32_t tag(EdgeKind kind) { return static_cast<std::uint32_t>(kind); }

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  EdgeKind kind = EdgeKind::AstChild;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Orders by (kind tag, src, dst), the canonical edge order of a graph.
bool canonical_less(const Edge& a, const Edge& b);

struct FaAstGraph {
  std::uint32_t num_nodes = 0;
  std::vector<java::NodeKind> node_kinds;
  std::vector<std::optional<std::string>> node_values;
  std::vector<Edge> edges;
  std::string source_path;
  std::optional<double> label_ms;

  std::array<std::size_t, kEdgeKindCount> edge_histogram() const;
  std::size_t count_kind(java::NodeKind kind) const;

  friend bool operator==(const FaAstGraph&, const FaAstGraph&) = default;
};

}  // namespace tepgnn::faast
