#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tepgnn/gnn/tensor.hpp"

namespace tepgnn::gnn {

class TooLarge : public EngineError {
 public:
  using EngineError::EngineError;
};

/// A k-element node set as a sorted list of node ids.
using NodeSet = std::vector<std::uint32_t>;

struct KSetNeighborhood {
  NodeSet set;
  std::vector<NodeSet> neighbors;        // sets sharing exactly k-1 nodes
  std::vector<NodeSet> local_neighbors;  // those whose swapped-in and swapped-out nodes are adjacent
};

/// Brute-force k-set neighborhoods of an undirected simple graph, for
/// checking the k = 1 reduction of the convolution. k in 1..3, n <= 12.
std::vector<KSetNeighborhood> kset_neighborhoods(std::uint32_t num_nodes,
                                                 const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                                 unsigned k);

}  // namespace tepgnn::gnn
