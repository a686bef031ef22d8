#include "tepgnn/gnn/layers.hpp"

#include <cmath>

namespace tepgnn::gnn {

Parameter& ParamStore::add(std::string name, Tensor value, bool trainable) {
  if (find(name)) throw std::invalid_argument("duplicate parameter " + name);
  return params_.emplace_back(std::move(name), std::move(value), trainable);
}

std::vector<Parameter*> ParamStore::all() const {
  std::vector<Parameter*> out;
  for (const auto& p : params_) out.push_back(const_cast<Parameter*>(&p));
  return out;
}

std::vector<Parameter*> ParamStore::trainable() const {
  std::vector<Parameter*> out;
  for (auto* p : all()) {
    if (p->trainable) out.push_back(p);
  }
  return out;
}

Parameter* ParamStore::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name == name) return const_cast<Parameter*>(&p);
  }
  return nullptr;
}

Tensor uniform_table(std::size_t rows, std::size_t cols, double limit, Rng& rng) {
  Tensor t = Tensor::matrix(rows, cols);
  for (auto& v : t.values()) v = rng.uniform(-limit, limit);
  return t;
}

Tensor fan_in_uniform(std::size_t fan_in, std::size_t rows, std::size_t cols, Rng& rng) {
  return uniform_table(rows, cols, 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
}

Linear Linear::create(ParamStore& store, const std::string& name, std::size_t d_in, std::size_t d_out, Rng& rng) {
  Linear l;
  l.weight = &store.add(name + ".weight", fan_in_uniform(d_in, d_in, d_out, rng));
  l.bias = &store.add(name + ".bias", fan_in_uniform(d_in, 1, d_out, rng));
  return l;
}

Var Linear::operator()(Tape& t, Var x) const {
  return add_row(matmul(x, t.param(*weight)), t.param(*bias));
}

GraphConvLayer GraphConvLayer::create(ParamStore& store, const std::string& name, std::size_t d_in,
                                      std::size_t d_out, Rng& rng) {
  if (d_in == 0 || d_out == 0) throw ShapeMismatch("graph conv widths must be positive");
  GraphConvLayer l;
  l.w_self = &store.add(name + ".w_self", fan_in_uniform(d_in, d_in, d_out, rng));
  l.w_neigh = &store.add(name + ".w_neigh", fan_in_uniform(d_in, d_in, d_out, rng));
  l.bias = &store.add(name + ".bias", fan_in_uniform(d_in, 1, d_out, rng));
  l.gates = &store.add(name + ".gates", Tensor::matrix(1, kEdgeKinds, 1.0));
  return l;
}

Var GraphConvLayer::operator()(Tape& t, Var x, const EdgeList& edges) const {
  if (x.value().cols() != w_self->value.rows()) {
    throw ShapeMismatch("graph conv input " + x.value().shape_string() + " vs weight " +
                        w_self->value.shape_string());
  }
  Var self = matmul(x, t.param(*w_self));
  Var agg = gated_aggregate(x, edges.src, edges.dst, edges.kinds, t.param(*gates));
  Var neigh = matmul(agg, t.param(*w_neigh));
  return add_row(add(self, neigh), t.param(*bias));
}

Tensor graphconv_forward(const GraphConvLayer& layer, const Tensor& node_feats, const EdgeList& edges,
                         Activation act) {
  Tape t;
  Var out = layer(t, t.constant(node_feats), edges);
  if (act == Activation::Relu) out = relu(out);
  return out.value();
}

BatchNorm BatchNorm::create(ParamStore& store, const std::string& name, std::size_t d) {
  BatchNorm b;
  b.gamma = &store.add(name + ".gamma", Tensor::matrix(1, d, 1.0));
  b.beta = &store.add(name + ".beta", Tensor::matrix(1, d, 0.0));
  b.running_mean = &store.add(name + ".running_mean", Tensor::matrix(1, d, 0.0), false);
  b.running_var = &store.add(name + ".running_var", Tensor::matrix(1, d, 1.0), false);
  return b;
}

Var BatchNorm::operator()(Tape& t, Var x, bool training) const {
  return batch_norm(x, t.param(*gamma), t.param(*beta),
                    BatchNormStats{&running_mean->value, &running_var->value}, training);
}

GruCell GruCell::create(ParamStore& store, const std::string& name, std::size_t d, Rng& rng) {
  GruCell g;
  g.w_ir = &store.add(name + ".w_ir", fan_in_uniform(d, d, d, rng));
  g.w_iz = &store.add(name + ".w_iz", fan_in_uniform(d, d, d, rng));
  g.w_in = &store.add(name + ".w_in", fan_in_uniform(d, d, d, rng));
  g.w_hr = &store.add(name + ".w_hr", fan_in_uniform(d, d, d, rng));
  g.w_hz = &store.add(name + ".w_hz", fan_in_uniform(d, d, d, rng));
  g.w_hn = &store.add(name + ".w_hn", fan_in_uniform(d, d, d, rng));
  g.b_r = &store.add(name + ".b_r", fan_in_uniform(d, 1, d, rng));
  g.b_z = &store.add(name + ".b_z", fan_in_uniform(d, 1, d, rng));
  g.b_in = &store.add(name + ".b_in", fan_in_uniform(d, 1, d, rng));
  g.b_hn = &store.add(name + ".b_hn", fan_in_uniform(d, 1, d, rng));
  return g;
}

// r = s(x Wir + h Whr + br), z = s(x Wiz + h Whz + bz),
// n = tanh(x Win + bin + r * (h Whn + bhn)), h' = n + z * (h - n).
Var GruCell::operator()(Tape& t, Var x, Var h) const {
  auto p = [&](Parameter* q) { return t.param(*q); };
  Var r = sigmoid(add_row(add(matmul(x, p(w_ir)), matmul(h, p(w_hr))), p(b_r)));
  Var z = sigmoid(add_row(add(matmul(x, p(w_iz)), matmul(h, p(w_hz))), p(b_z)));
  Var hn = add_row(matmul(h, p(w_hn)), p(b_hn));
  Var n = tanh(add(add_row(matmul(x, p(w_in)), p(b_in)), mul(r, hn)));
  return add(n, mul(z, sub(h, n)));
}

Tensor global_max_pool(const Tensor& node_feats, std::span<const std::size_t> boundaries) {
  Tape t;
  return segment_max(t.constant(node_feats), boundaries).value();
}

}  // namespace tepgnn::gnn
