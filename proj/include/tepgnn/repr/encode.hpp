#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tepgnn/faast/graph.hpp"
#include "tepgnn/repr/vocabulary.hpp"

namespace tepgnn::repr {

class MissingLabel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Min-max scaling of execution times to [0, 1].
struct Normalizer {
  double min_ms = 0.0;
  double max_ms = 1.0;

  double span() const;
  /// Clamped to [0, 1]; labels outside the fitted range saturate.
  double normalize(double ms) const;
  double denormalize(double target) const;
  bool degenerate() const;

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

/// Fits on the labelled graphs; all labels equal yields a degenerate range
/// and a warning on stderr.
Normalizer fit_normalizer(std::span<const double> labels_ms);

struct EncodedGraph {
  std::vector<std::uint32_t> node_kind_ids;
  std::vector<std::uint32_t> node_value_ids;
  std::vector<std::uint32_t> edge_src;
  std::vector<std::uint32_t> edge_dst;
  std::vector<std::uint8_t> edge_kind_ids;
  std::optional<double> target;

  std::size_t num_nodes() const { return node_kind_ids.size(); }
  std::size_t num_edges() const { return edge_src.size(); }

  friend bool operator==(const EncodedGraph&, const EncodedGraph&) = default;
};

enum class EncodeMode { Training, Inference };

/// Training mode requires a label; inference mode encodes one if present.
EncodedGraph encode(const faast::FaAstGraph& graph, const Vocabulary& vocab, const Normalizer& norm,
                    EncodeMode mode = EncodeMode::Training);

}  // namespace tepgnn::repr
