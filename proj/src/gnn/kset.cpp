#include "tepgnn/gnn/kset.hpp"

#include <algorithm>
#include <set>

namespace tepgnn::gnn {

namespace {

void combinations(std::uint32_t n, unsigned k, std::uint32_t start, NodeSet& cur, std::vector<NodeSet>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t v = start; v < n; ++v) {
    cur.push_back(v);
    combinations(n, k, v + 1, cur, out);
    cur.pop_back();
  }
}

NodeSet difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<KSetNeighborhood> kset_neighborhoods(std::uint32_t num_nodes,
                                                 const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                                 unsigned k) {
  if (k < 1 || k > 3) throw EngineError("k must be 1, 2 or 3");
  if (num_nodes > 12) throw TooLarge("k-set enumeration is limited to 12 nodes");
  std::set<std::pair<std::uint32_t, std::uint32_t>> adj;
  for (auto [u, w] : edges) {
    if (u >= num_nodes || w >= num_nodes) throw ShapeMismatch("edge endpoint out of range");
    adj.insert({u, w});
    adj.insert({w, u});
  }
  std::vector<NodeSet> sets;
  NodeSet cur;
  combinations(num_nodes, k, 0, cur, sets);

  std::vector<KSetNeighborhood> out;
  for (const auto& s : sets) {
    KSetNeighborhood nb{s, {}, {}};
    for (const auto& t : sets) {
      NodeSet common;
      std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(common));
      if (common.size() != k - 1) continue;
      nb.neighbors.push_back(t);
      // |s \ t| = |t \ s| = 1 here, so the local test is a single pair.
      auto u = difference(s, t), w = difference(t, s);
      if (adj.count({u[0], w[0]})) nb.local_neighbors.push_back(t);
    }
    out.push_back(std::move(nb));
  }
  return out;
}

}  // namespace tepgnn::gnn
