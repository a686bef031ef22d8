#pragma once

// Independent reference computations for the numerical engine. Plain loops
// only; nothing here goes through the tape.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string_view>
#include <vector>

#include "tepgnn/gnn/network.hpp"
#include "tepgnn/rng.hpp"

namespace tepgnn::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const gnn::Tensor& t) {
  Dense d(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) d[r][c] = t(r, c);
  }
  return d;
}

inline Dense dense_matmul(const Dense& a, const Dense& b) {
  Dense out(a.size(), std::vector<double>(b.empty() ? 0 : b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

/// relu(H W1 + A_g H W2 + b) with A_g[v][u] = sum of gate(kind) over edges u -> v.
inline Dense dense_graphconv(const Dense& h, const std::vector<std::uint32_t>& src,
                             const std::vector<std::uint32_t>& dst, const std::vector<std::uint8_t>& kinds,
                             const gnn::GraphConvLayer& layer, bool apply_relu) {
  const std::size_t n = h.size();
  Dense adj(n, std::vector<double>(n, 0.0));
  for (std::size_t e = 0; e < src.size(); ++e) adj[dst[e]][src[e]] += layer.gates->value[kinds[e]];
  Dense self = dense_matmul(h, to_dense(layer.w_self->value));
  Dense neigh = dense_matmul(dense_matmul(adj, h), to_dense(layer.w_neigh->value));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < self[i].size(); ++j) {
      double v = self[i][j] + neigh[i][j] + layer.bias->value[j];
      self[i][j] = apply_relu ? std::max(v, 0.0) : v;
    }
  }
  return self;
}

inline repr::EncodedGraph random_graph(Rng& rng, std::size_t max_nodes, std::size_t num_kinds,
                                       std::size_t num_values, std::size_t max_edges_per_node = 3) {
  repr::EncodedGraph g;
  std::size_t n = 1 + rng.below(max_nodes);
  for (std::size_t i = 0; i < n; ++i) {
    g.node_kind_ids.push_back(static_cast<std::uint32_t>(rng.below(num_kinds)));
    g.node_value_ids.push_back(static_cast<std::uint32_t>(rng.below(num_values)));
  }
  std::size_t m = rng.below(n * max_edges_per_node + 1);
  for (std::size_t e = 0; e < m; ++e) {
    g.edge_src.push_back(static_cast<std::uint32_t>(rng.below(n)));
    g.edge_dst.push_back(static_cast<std::uint32_t>(rng.below(n)));
    g.edge_kind_ids.push_back(static_cast<std::uint8_t>(rng.below(10)));
  }
  g.target = rng.uniform();
  return g;
}

/// Relabels node i as perm[i] and shuffles the edge order.
inline repr::EncodedGraph permute(const repr::EncodedGraph& g, Rng& rng) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  rng.shuffle(perm);
  repr::EncodedGraph p = g;
  for (std::size_t i = 0; i < n; ++i) {
    p.node_kind_ids[perm[i]] = g.node_kind_ids[i];
    p.node_value_ids[perm[i]] = g.node_value_ids[i];
  }
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  for (std::size_t e = 0; e < order.size(); ++e) {
    p.edge_src[e] = perm[g.edge_src[order[e]]];
    p.edge_dst[e] = perm[g.edge_dst[order[e]]];
    p.edge_kind_ids[e] = g.edge_kind_ids[order[e]];
  }
  return p;
}

struct GradCheckResult {
  std::size_t checked = 0;
  double worst_rel = 0.0;
  std::string worst_name;
  // Entries whose +-eps stencil flips a ReLU or a max-pool winner; the loss
  // has a kink inside the stencil there.
  std::size_t skipped = 0;
};

/// Redraws both embedding tables from U(-1, 1). At the shipped init the
/// first-layer features are nearly constant, batch norm divides by a variance
/// close to its epsilon, and central differences at eps=1e-5 pick up O(1e-4)
/// truncation error.
inline void widen_embeddings(gnn::Network& net, Rng& rng) {
  for (const char* name : {"embedding.kind", "embedding.value"}) {
    auto* p = net.find(name);
    p->value = gnn::uniform_table(p->value.rows(), p->value.cols(), 1.0, rng);
  }
}

/// One gradient check of a freshly seeded small net on a random 3-graph batch.
inline GradCheckResult seeded_gradient_check(gnn::ModelKind kind, std::uint64_t seed, std::size_t d = 8);

/// ReLU signs and max-pool winners on the tape.
inline std::vector<std::size_t> branch_pattern(const gnn::Tape& t) {
  std::vector<std::size_t> bits;
  for (std::size_t id = 0; id < t.size(); ++id) {
    if (std::string_view(t.op(id)) == "relu") {
      for (double v : t.value(id).values()) bits.push_back(v > 0);
    }
    const auto& b = t.branches(id);
    bits.insert(bits.end(), b.begin(), b.end());
  }
  return bits;
}

// Gradients below this magnitude are compared in absolute terms: central
// differences at eps = 1e-5 carry ~1e-11 of rounding noise on an O(0.1)
// loss, which no relative test can resolve for a gradient of that size.
inline constexpr double kGradFloor = 1e-7;

/// Central-difference check of every trainable entry against backprop.
inline GradCheckResult gradient_check(gnn::Network& net, const gnn::GraphBatch& batch, double eps = 1e-5) {
  std::vector<std::size_t> pattern;
  auto loss_at = [&](bool& smooth) {
    gnn::Tape t;
    double loss = gnn::mse(net.forward(t, batch, true), batch.targets).value()[0];
    smooth = smooth && branch_pattern(t) == pattern;
    return loss;
  };
  for (auto* p : net.trainable()) p->zero_grad();
  {
    gnn::Tape t;
    gnn::Var loss = gnn::mse(net.forward(t, batch, true), batch.targets);
    t.backward(loss);
    pattern = branch_pattern(t);
  }
  GradCheckResult res;
  for (auto* p : net.trainable()) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      bool smooth = true;
      p->value[i] = orig + eps;
      double up = loss_at(smooth);
      p->value[i] = orig - eps;
      double down = loss_at(smooth);
      p->value[i] = orig;
      if (!smooth) {
        ++res.skipped;
        continue;
      }
      double numeric = (up - down) / (2 * eps);
      double analytic = p->grad[i];
      double rel = std::abs(numeric - analytic) / std::max({std::abs(numeric), std::abs(analytic), kGradFloor});
      ++res.checked;
      if (rel > res.worst_rel) {
        res.worst_rel = rel;
        res.worst_name = p->name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return res;
}

inline GradCheckResult seeded_gradient_check(gnn::ModelKind kind, std::uint64_t seed, std::size_t d) {
  Rng rng(derive_seed(seed, "gradcheck"));
  gnn::NetConfig c;
  c.kind = kind;
  c.hidden_dim = d;
  c.num_kinds = 6;
  c.num_values = 7;
  c.seed = seed;
  auto net = gnn::make_network(c);
  widen_embeddings(*net, rng);
  std::vector<repr::EncodedGraph> graphs;
  for (int i = 0; i < 3; ++i) graphs.push_back(random_graph(rng, 8, 6, 7));
  std::vector<const repr::EncodedGraph*> ptrs;
  for (auto& g : graphs) ptrs.push_back(&g);
  return gradient_check(*net, gnn::make_batch(ptrs));
}

}  // namespace tepgnn::testing
