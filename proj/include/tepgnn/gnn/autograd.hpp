#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>

#include "tepgnn/gnn/tensor.hpp"

namespace tepgnn::gnn {

/// A named model tensor. Buffers (batch-norm running statistics) are stored
/// the same way with `trainable = false` so they travel with the artifact.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Parameter(std::string n, Tensor v, bool train = true)
      : name(std::move(n)), value(std::move(v)), grad(value.shape(), 0.0), trainable(train) {}
  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a value recorded on a tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
};

/// Records a forward computation and replays it backwards.
///
/// Parameter leaves are not copied: their values are read in place and their
/// gradients accumulate straight into Parameter::grad. Index arrays handed to
/// graph ops are borrowed and must outlive backward().
class Tape {
 public:
  using Backward = std::function<void(Tape&, const Tensor& out_grad)>;

  Var constant(Tensor value);
  Var param(Parameter& p);
  /// Appends an op result. `requires_grad` is whether any input needs one;
  /// `backward` is dropped otherwise. Throws NonFiniteValue for NaN/Inf.
  /// `branches` lists the discrete choices a piecewise op made (e.g. argmax rows).
  Var record(Tensor value, bool requires_grad, Backward backward, const char* op,
             std::vector<std::size_t> branches = {});

  const Tensor& value(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Op label of a recorded node; "constant" or "param" for leaves.
  const char* op(std::size_t id) const { return nodes_[id].op; }
  const std::vector<std::size_t>& branches(std::size_t id) const { return nodes_[id].branches; }
  /// Gradient accumulator for a node, or nullptr when it needs none.
  Tensor* grad_sink(std::size_t id);

  /// Seeds d(root)/d(root) = 1; root must hold a single element.
  void backward(Var root);
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Parameter* param = nullptr;
    bool requires_grad = false;
    Tensor grad;
    Backward backward;
    const char* op = "constant";
    std::vector<std::size_t> branches;
  };
  std::deque<Node> nodes_;
};

inline const Tensor& Var::value() const { return tape->value(id); }

// Differentiable ops. All operands are 2-D.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// x [n x m] plus a [1 x m] row broadcast over rows.
Var add_row(Var x, Var row);
Var relu(Var x);
Var sigmoid(Var x);
Var tanh(Var x);
/// Rows of `table` selected by `ids`.
Var gather_rows(Var table, std::span<const std::uint32_t> ids);
/// out[dst] += gates[kind] * h[src] for every edge.
Var gated_aggregate(Var h, std::span<const std::uint32_t> src, std::span<const std::uint32_t> dst,
                    std::span<const std::uint8_t> kinds, Var gates);

struct BatchNormStats {
  Tensor* running_mean;
  Tensor* running_var;
  double momentum = 0.1;
  double eps = 1e-5;
};
/// Per-column normalization over rows. Training mode uses batch statistics
/// and updates the running ones; inference mode uses the running ones.
Var batch_norm(Var x, Var gamma, Var beta, BatchNormStats stats, bool training);

class EmptyGraph : public EngineError {
 public:
  using EngineError::EngineError;
};
/// Column-wise max over each row segment [offsets[b], offsets[b+1]).
Var segment_max(Var x, std::span<const std::size_t> offsets);
/// Mean squared error of a [B x 1] prediction against B targets.
Var mse(Var pred, std::span<const double> targets);

}  // namespace tepgnn::gnn
