#include "tepgnn/repr/encode.hpp"

#include <algorithm>
#include <iostream>

namespace tepgnn::repr {

namespace {
constexpr double kMinSpan = 1e-9;
}

double Normalizer::span() const { return std::max(max_ms - min_ms, kMinSpan); }

double Normalizer::normalize(double ms) const {
  return std::clamp((ms - min_ms) / span(), 0.0, 1.0);
}

double Normalizer::denormalize(double target) const { return min_ms + target * span(); }

bool Normalizer::degenerate() const { return max_ms - min_ms < kMinSpan; }

Normalizer fit_normalizer(std::span<const double> labels_ms) {
  if (labels_ms.empty()) throw EmptyCorpus("no labels to fit the normalization on");
  auto [lo, hi] = std::minmax_element(labels_ms.begin(), labels_ms.end());
  Normalizer n{*lo, *hi};
  if (n.degenerate()) {
    std::cerr << "warning: all training labels are equal (" << *lo
              << " ms); normalized targets collapse to 0\n";
  }
  return n;
}

EncodedGraph encode(const faast::FaAstGraph& graph, const Vocabulary& vocab, const Normalizer& norm,
                    EncodeMode mode) {
  if (mode == EncodeMode::Training && !graph.label_ms) {
    throw MissingLabel("graph " + graph.source_path + " has no execution time label");
  }
  EncodedGraph e;
  e.node_kind_ids.reserve(graph.num_nodes);
  e.node_value_ids.reserve(graph.num_nodes);
  for (std::uint32_t i = 0; i < graph.num_nodes; ++i) {
    e.node_kind_ids.push_back(vocab.kind_id(graph.node_kinds[i]));
    const auto& v = graph.node_values[i];
    e.node_value_ids.push_back(v ? vocab.value_id(*v) : kUnk);
  }
  e.edge_src.reserve(graph.edges.size());
  e.edge_dst.reserve(graph.edges.size());
  e.edge_kind_ids.reserve(graph.edges.size());
  for (const auto& edge : graph.edges) {
    e.edge_src.push_back(edge.src);
    e.edge_dst.push_back(edge.dst);
    e.edge_kind_ids.push_back(static_cast<std::uint8_t>(faast::tag(edge.kind)));
  }
  if (graph.label_ms) e.target = norm.normalize(*graph.label_ms);
  return e;
}

}  // namespace tepgnn::repr
