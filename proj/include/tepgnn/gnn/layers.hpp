#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "tepgnn/gnn/autograd.hpp"
#include "tepgnn/rng.hpp"

namespace tepgnn::gnn {

inline constexpr std::size_t kEdgeKinds = 10;

/// Borrowed view of a graph's (or a batch's) edge list.
struct EdgeList {
  std::span<const std::uint32_t> src;
  std::span<const std::uint32_t> dst;
  std::span<const std::uint8_t> kinds;
};

/// Owns parameters on behalf of a network; addresses stay stable.
class ParamStore {
 public:
  Parameter& add(std::string name, Tensor value, bool trainable = true);
  std::vector<Parameter*> all() const;
  std::vector<Parameter*> trainable() const;
  Parameter* find(const std::string& name) const;

 private:
  std::deque<Parameter> params_;
};

/// Uniform in +-1/sqrt(fan_in), the usual default for dense layers.
Tensor fan_in_uniform(std::size_t fan_in, std::size_t rows, std::size_t cols, Rng& rng);
Tensor uniform_table(std::size_t rows, std::size_t cols, double limit, Rng& rng);

struct Linear {
  Parameter* weight = nullptr;  // [d_in x d_out]
  Parameter* bias = nullptr;    // [1 x d_out]

  static Linear create(ParamStore& store, const std::string& name, std::size_t d_in, std::size_t d_out, Rng& rng);
  Var operator()(Tape& t, Var x) const;
};

/// One graph convolution: x*W_self + (sum over incoming edges of
/// gate[kind] * x[src]) * W_neigh + bias. Activation is applied by the caller.
struct GraphConvLayer {
  Parameter* w_self = nullptr;   // [d_in x d_out]
  Parameter* w_neigh = nullptr;  // [d_in x d_out]
  Parameter* bias = nullptr;     // [1 x d_out]
  Parameter* gates = nullptr;    // [1 x kEdgeKinds], starts at 1

  static GraphConvLayer create(ParamStore& store, const std::string& name, std::size_t d_in,
                               std::size_t d_out, Rng& rng);
  Var operator()(Tape& t, Var x, const EdgeList& edges) const;
};

enum class Activation { Identity, Relu };

/// Tape-free convenience: the layer followed by `act`.
Tensor graphconv_forward(const GraphConvLayer& layer, const Tensor& node_feats, const EdgeList& edges,
                         Activation act = Activation::Relu);

struct BatchNorm {
  Parameter* gamma = nullptr;
  Parameter* beta = nullptr;
  Parameter* running_mean = nullptr;
  Parameter* running_var = nullptr;

  static BatchNorm create(ParamStore& store, const std::string& name, std::size_t d);
  Var operator()(Tape& t, Var x, bool training) const;
};

/// Standard GRU cell: x is the input (aggregated message), h the state.
struct GruCell {
  Parameter *w_ir, *w_iz, *w_in;  // [d x d]
  Parameter *w_hr, *w_hz, *w_hn;  // [d x d]
  Parameter *b_r, *b_z, *b_in, *b_hn;

  static GruCell create(ParamStore& store, const std::string& name, std::size_t d, Rng& rng);
  Var operator()(Tape& t, Var x, Var h) const;
};

/// Tape-free pooling: column-wise max per graph.
Tensor global_max_pool(const Tensor& node_feats, std::span<const std::size_t> boundaries);

}  // namespace tepgnn::gnn
