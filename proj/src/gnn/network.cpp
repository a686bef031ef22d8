#include "tepgnn/gnn/network.hpp"

namespace tepgnn::gnn {

namespace {
constexpr double kEmbeddingInit = 0.05;
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::GraphConv ? "graphconv" : "ggnn"; }

std::optional<ModelKind> model_kind_from_string(std::string_view name) {
  if (name == "graphconv") return ModelKind::GraphConv;
  if (name == "ggnn") return ModelKind::Ggnn;
  return std::nullopt;
}

GraphBatch make_batch(std::span<const repr::EncodedGraph* const> graphs) {
  GraphBatch b;
  b.offsets.push_back(0);
  bool labelled = !graphs.empty();
  for (const auto* g : graphs) {
    const auto base = static_cast<std::uint32_t>(b.kind_ids.size());
    b.kind_ids.insert(b.kind_ids.end(), g->node_kind_ids.begin(), g->node_kind_ids.end());
    b.value_ids.insert(b.value_ids.end(), g->node_value_ids.begin(), g->node_value_ids.end());
    for (std::size_t e = 0; e < g->num_edges(); ++e) {
      b.src.push_back(base + g->edge_src[e]);
      b.dst.push_back(base + g->edge_dst[e]);
    }
    b.edge_kinds.insert(b.edge_kinds.end(), g->edge_kind_ids.begin(), g->edge_kind_ids.end());
    b.offsets.push_back(b.kind_ids.size());
    if (g->target) {
      b.targets.push_back(*g->target);
    } else {
      labelled = false;
    }
  }
  if (!labelled) b.targets.clear();
  return b;
}

GraphBatch make_batch(const repr::EncodedGraph& graph) {
  const repr::EncodedGraph* one[] = {&graph};
  return make_batch(one);
}

Network::Network(const NetConfig& config) : config_(config) {
  if (config.hidden_dim < 2) throw ShapeMismatch("hidden width must be at least 2");
  if (config.num_kinds == 0 || config.num_values == 0) throw ShapeMismatch("embedding tables must be non-empty");
}

void Network::build_head(Rng& rng) {
  const std::size_t d = config_.hidden_dim;
  head_hidden_ = Linear::create(store_, "head.hidden", d, d / 2, rng);
  head_out_ = Linear::create(store_, "head.out", d / 2, 1, rng);
}

Var Network::forward(Tape& t, const GraphBatch& batch, bool training) {
  for (auto id : batch.kind_ids) {
    if (id >= config_.num_kinds) throw VocabMismatch("kind id " + std::to_string(id) + " outside the model vocabulary");
  }
  for (auto id : batch.value_ids) {
    if (id >= config_.num_values) throw VocabMismatch("value id " + std::to_string(id) + " outside the model vocabulary");
  }
  Var h = add(gather_rows(t.param(*kind_embedding_), batch.kind_ids),
              gather_rows(t.param(*value_embedding_), batch.value_ids));
  h = propagate(t, h, batch, training);
  Var pooled = segment_max(h, batch.offsets);
  return sigmoid(head_out_(t, relu(head_hidden_(t, pooled))));
}

GraphConvNet::GraphConvNet(const NetConfig& config) : Network(config) {
  Rng rng(derive_seed(config.seed, "init"));
  const std::size_t d = config.hidden_dim;
  kind_embedding_ = &store_.add("embedding.kind", uniform_table(config.num_kinds, d, kEmbeddingInit, rng));
  value_embedding_ = &store_.add("embedding.value", uniform_table(config.num_values, d, kEmbeddingInit, rng));
  for (std::size_t l = 0; l < config.conv_layers; ++l) {
    convs_.push_back(GraphConvLayer::create(store_, "conv" + std::to_string(l), d, d, rng));
    norms_.push_back(BatchNorm::create(store_, "norm" + std::to_string(l), d));
  }
  build_head(rng);
}

Var GraphConvNet::propagate(Tape& t, Var h, const GraphBatch& batch, bool training) {
  const EdgeList edges = batch.edges();
  for (std::size_t l = 0; l < convs_.size(); ++l) {
    h = norms_[l](t, relu(convs_[l](t, h, edges)), training);
  }
  return h;
}

GgnnNet::GgnnNet(const NetConfig& config) : Network(config) {
  Rng rng(derive_seed(config.seed, "init"));
  const std::size_t d = config.hidden_dim;
  kind_embedding_ = &store_.add("embedding.kind", uniform_table(config.num_kinds, d, kEmbeddingInit, rng));
  value_embedding_ = &store_.add("embedding.value", uniform_table(config.num_values, d, kEmbeddingInit, rng));
  message_ = &store_.add("message.weight", fan_in_uniform(d, d, d, rng));
  gates_ = &store_.add("message.gates", Tensor::matrix(1, kEdgeKinds, 1.0));
  gru_ = GruCell::create(store_, "gru", d, rng);
  build_head(rng);
}

Var GgnnNet::propagate(Tape& t, Var h, const GraphBatch& batch, bool) {
  for (std::size_t step = 0; step < config_.ggnn_steps; ++step) {
    Var agg = gated_aggregate(h, batch.src, batch.dst, batch.edge_kinds, t.param(*gates_));
    Var m = matmul(agg, t.param(*message_));
    h = gru_(t, m, h);
  }
  return h;
}

std::unique_ptr<Network> make_network(const NetConfig& config) {
  if (config.kind == ModelKind::GraphConv) return std::make_unique<GraphConvNet>(config);
  return std::make_unique<GgnnNet>(config);
}

std::vector<double> predict(Network& net, const GraphBatch& batch) {
  Tape t;
  Var out = net.forward(t, batch, false);
  return out.value().values();
}

double predict(Network& net, const repr::EncodedGraph& graph) { return predict(net, make_batch(graph))[0]; }

}  // namespace tepgnn::gnn
