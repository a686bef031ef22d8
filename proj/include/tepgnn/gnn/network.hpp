#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tepgnn/gnn/layers.hpp"
#include "tepgnn/repr/encode.hpp"

namespace tepgnn::gnn {

class VocabMismatch : public EngineError {
 public:
  using EngineError::EngineError;
};

enum class ModelKind { GraphConv, Ggnn };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(std::string_view name);

struct NetConfig {
  ModelKind kind = ModelKind::GraphConv;
  std::size_t hidden_dim = 64;
  std::size_t num_kinds = 0;
  std::size_t num_values = 0;
  std::size_t conv_layers = 3;  // GraphConvNet only
  std::size_t ggnn_steps = 4;   // GgnnNet only
  std::uint64_t seed = 0;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

/// Several encoded graphs laid out as one disconnected graph.
struct GraphBatch {
  std::vector<std::uint32_t> kind_ids;
  std::vector<std::uint32_t> value_ids;
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;
  std::vector<std::uint8_t> edge_kinds;
  std::vector<std::size_t> offsets;  // graph b owns nodes [offsets[b], offsets[b+1])
  std::vector<double> targets;       // empty unless every graph has one

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  EdgeList edges() const { return {src, dst, edge_kinds}; }
};

GraphBatch make_batch(std::span<const repr::EncodedGraph* const> graphs);
GraphBatch make_batch(const repr::EncodedGraph& graph);

/// Graph-level regressor: node embeddings -> propagation -> global max pool ->
/// two-layer head with a sigmoid output in (0, 1).
class Network {
 public:
  virtual ~Network() = default;
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  const NetConfig& config() const { return config_; }
  /// Returns a [B x 1] prediction. Training mode uses batch statistics in
  /// batch norm and updates the running statistics.
  Var forward(Tape& tape, const GraphBatch& batch, bool training);

  std::vector<Parameter*> parameters() const { return store_.all(); }
  std::vector<Parameter*> trainable() const { return store_.trainable(); }
  Parameter* find(const std::string& name) const { return store_.find(name); }

 protected:
  explicit Network(const NetConfig& config);
  virtual Var propagate(Tape& tape, Var h, const GraphBatch& batch, bool training) = 0;

  NetConfig config_;
  ParamStore store_;
  Parameter* kind_embedding_ = nullptr;
  Parameter* value_embedding_ = nullptr;
  Linear head_hidden_;
  Linear head_out_;

  void build_head(Rng& rng);
};

/// Three graph convolutions, each followed by ReLU then batch norm.
class GraphConvNet : public Network {
 public:
  explicit GraphConvNet(const NetConfig& config);

 private:
  Var propagate(Tape& tape, Var h, const GraphBatch& batch, bool training) override;
  std::vector<GraphConvLayer> convs_;
  std::vector<BatchNorm> norms_;
};

/// Gated graph network: T rounds of gated message sum followed by a GRU
/// update with weights shared across rounds.
class GgnnNet : public Network {
 public:
  explicit GgnnNet(const NetConfig& config);

 private:
  Var propagate(Tape& tape, Var h, const GraphBatch& batch, bool training) override;
  Parameter* message_ = nullptr;
  Parameter* gates_ = nullptr;
  GruCell gru_;
};

std::unique_ptr<Network> make_network(const NetConfig& config);

/// Inference-mode predictions, one per graph.
std::vector<double> predict(Network& net, const GraphBatch& batch);
double predict(Network& net, const repr::EncodedGraph& graph);

}  // namespace tepgnn::gnn
