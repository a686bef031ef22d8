#include "tepgnn/gnn/autograd.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace tepgnn::gnn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstView = Eigen::Map<const RowMat>;
using View = Eigen::Map<RowMat>;

ConstView view(const Tensor& t) { return ConstView(t.data(), t.rows(), t.cols()); }
View view(Tensor& t) { return View(t.data(), t.rows(), t.cols()); }

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(op) + ": " + a.shape_string() + " vs " + b.shape_string());
  }
}

bool any_grad(Tape& t, std::initializer_list<Var> vs) {
  for (const auto& v : vs) {
    if (t.requires_grad(v.id)) return true;
  }
  return false;
}

template <typename F>
Var unary_map(Var x, F f, const char* op, std::function<double(double, double)> deriv) {
  Tape& t = *x.tape;
  const Tensor& xv = x.value();
  Tensor out = Tensor::matrix(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  auto id = x.id;
  std::size_t out_id = t.size();
  return t.record(
      std::move(out), t.requires_grad(x.id),
      [id, out_id, deriv](Tape& tape, const Tensor& g) {
        Tensor* gx = tape.grad_sink(id);
        const Tensor& xv = tape.value(id);
        const Tensor& yv = tape.value(out_id);
        for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * deriv(xv[i], yv[i]);
      },
      op);
}

}  // namespace

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), nullptr, false, {}, {}});
  return Var{this, nodes_.size() - 1};
}

Var Tape::param(Parameter& p) {
  nodes_.push_back(Node{{}, &p, p.trainable, {}, {}, "param"});
  return Var{this, nodes_.size() - 1};
}

Var Tape::record(Tensor value, bool requires_grad, Backward backward, const char* op,
                 std::vector<std::size_t> branches) {
  if (!value.all_finite()) throw NonFiniteValue(std::string(op) + " produced a non-finite value");
  nodes_.push_back(
      Node{std::move(value), nullptr, requires_grad, {}, requires_grad ? std::move(backward) : nullptr, op,
           std::move(branches)});
  return Var{this, nodes_.size() - 1};
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.param ? n.param->value : n.value;
}

Tensor* Tape::grad_sink(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.param) return &n.param->grad;
  if (n.grad.size() == 0) n.grad = Tensor(n.value.shape(), 0.0);
  return &n.grad;
}

void Tape::backward(Var root) {
  if (value(root.id).size() != 1) throw ShapeMismatch("backward needs a scalar root");
  if (!requires_grad(root.id)) return;
  grad_sink(root.id)->fill(1.0);
  for (std::size_t i = root.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backward || n.grad.size() == 0) continue;
    n.backward(*this, n.grad);
  }
}

Var matmul(Var a, Var b) {
  Tape& t = *a.tape;
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) {
    throw ShapeMismatch("matmul: " + av.shape_string() + " x " + bv.shape_string());
  }
  Tensor out = Tensor::matrix(av.rows(), bv.cols());
  view(out).noalias() = view(av) * view(bv);
  return t.record(
      std::move(out), any_grad(t, {a, b}),
      [ai = a.id, bi = b.id](Tape& tape, const Tensor& g) {
        if (Tensor* ga = tape.grad_sink(ai)) view(*ga).noalias() += view(g) * view(tape.value(bi)).transpose();
        if (Tensor* gb = tape.grad_sink(bi)) view(*gb).noalias() += view(tape.value(ai)).transpose() * view(g);
      },
      "matmul");
}

Var add(Var a, Var b) {
  Tape& t = *a.tape;
  require_same(a.value(), b.value(), "add");
  Tensor out = a.value();
  view(out) += view(b.value());
  return t.record(
      std::move(out), any_grad(t, {a, b}),
      [ai = a.id, bi = b.id](Tape& tape, const Tensor& g) {
        if (Tensor* ga = tape.grad_sink(ai)) view(*ga) += view(g);
        if (Tensor* gb = tape.grad_sink(bi)) view(*gb) += view(g);
      },
      "add");
}

Var sub(Var a, Var b) {
  Tape& t = *a.tape;
  require_same(a.value(), b.value(), "sub");
  Tensor out = a.value();
  view(out) -= view(b.value());
  return t.record(
      std::move(out), any_grad(t, {a, b}),
      [ai = a.id, bi = b.id](Tape& tape, const Tensor& g) {
        if (Tensor* ga = tape.grad_sink(ai)) view(*ga) += view(g);
        if (Tensor* gb = tape.grad_sink(bi)) view(*gb) -= view(g);
      },
      "sub");
}

Var mul(Var a, Var b) {
  Tape& t = *a.tape;
  require_same(a.value(), b.value(), "mul");
  Tensor out = a.value();
  view(out).array() *= view(b.value()).array();
  return t.record(
      std::move(out), any_grad(t, {a, b}),
      [ai = a.id, bi = b.id](Tape& tape, const Tensor& g) {
        if (Tensor* ga = tape.grad_sink(ai)) view(*ga).array() += view(g).array() * view(tape.value(bi)).array();
        if (Tensor* gb = tape.grad_sink(bi)) view(*gb).array() += view(g).array() * view(tape.value(ai)).array();
      },
      "mul");
}

Var add_row(Var x, Var row) {
  Tape& t = *x.tape;
  const Tensor& xv = x.value();
  const Tensor& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != xv.cols()) {
    throw ShapeMismatch("add_row: " + xv.shape_string() + " + " + rv.shape_string());
  }
  Tensor out = xv;
  view(out).rowwise() += view(rv).row(0);
  return t.record(
      std::move(out), any_grad(t, {x, row}),
      [xi = x.id, ri = row.id](Tape& tape, const Tensor& g) {
        if (Tensor* gx = tape.grad_sink(xi)) view(*gx) += view(g);
        if (Tensor* gr = tape.grad_sink(ri)) view(*gr) += view(g).colwise().sum();
      },
      "add_row");
}

Var relu(Var x) {
  return unary_map(x, [](double v) { return v > 0 ? v : 0.0; }, "relu",
                   [](double in, double) { return in > 0 ? 1.0 : 0.0; });
}

Var sigmoid(Var x) {
  return unary_map(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        double e = std::exp(v);
        return e / (1.0 + e);
      },
      "sigmoid", [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
  return unary_map(x, [](double v) { return std::tanh(v); }, "tanh",
                   [](double, double y) { return 1.0 - y * y; });
}

Var gather_rows(Var table, std::span<const std::uint32_t> ids) {
  Tape& t = *table.tape;
  const Tensor& tv = table.value();
  const std::size_t d = tv.cols();
  Tensor out = Tensor::matrix(ids.size(), d);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= tv.rows()) {
      throw ShapeMismatch("gather_rows: id " + std::to_string(ids[r]) + " outside table of " +
                          std::to_string(tv.rows()) + " rows");
    }
    std::copy_n(tv.data() + ids[r] * d, d, out.data() + r * d);
  }
  return t.record(
      std::move(out), t.requires_grad(table.id),
      [ti = table.id, ids, d](Tape& tape, const Tensor& g) {
        Tensor* gt = tape.grad_sink(ti);
        for (std::size_t r = 0; r < ids.size(); ++r) {
          double* dst = gt->data() + ids[r] * d;
          const double* src = g.data() + r * d;
          for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
        }
      },
      "gather_rows");
}

Var gated_aggregate(Var h, std::span<const std::uint32_t> src, std::span<const std::uint32_t> dst,
                    std::span<const std::uint8_t> kinds, Var gates) {
  Tape& t = *h.tape;
  const Tensor& hv = h.value();
  const Tensor& gv = gates.value();
  if (src.size() != dst.size() || src.size() != kinds.size()) {
    throw ShapeMismatch("gated_aggregate: edge arrays differ in length");
  }
  const std::size_t n = hv.rows(), d = hv.cols();
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] >= n || dst[e] >= n) throw ShapeMismatch("gated_aggregate: edge endpoint out of range");
    if (kinds[e] >= gv.size()) throw ShapeMismatch("gated_aggregate: edge kind without a gate");
  }
  Tensor out = Tensor::matrix(n, d);
  for (std::size_t e = 0; e < src.size(); ++e) {
    const double g = gv[kinds[e]];
    const double* from = hv.data() + src[e] * d;
    double* to = out.data() + dst[e] * d;
    for (std::size_t c = 0; c < d; ++c) to[c] += g * from[c];
  }
  return t.record(
      std::move(out), any_grad(t, {h, gates}),
      [hi = h.id, gi = gates.id, src, dst, kinds, d](Tape& tape, const Tensor& g) {
        Tensor* gh = tape.grad_sink(hi);
        Tensor* gg = tape.grad_sink(gi);
        const Tensor& hv = tape.value(hi);
        const Tensor& gv = tape.value(gi);
        for (std::size_t e = 0; e < src.size(); ++e) {
          const double* up = g.data() + dst[e] * d;
          if (gh) {
            double* to = gh->data() + src[e] * d;
            const double w = gv[kinds[e]];
            for (std::size_t c = 0; c < d; ++c) to[c] += w * up[c];
          }
          if (gg) {
            const double* from = hv.data() + src[e] * d;
            double dot = 0;
            for (std::size_t c = 0; c < d; ++c) dot += from[c] * up[c];
            (*gg)[kinds[e]] += dot;
          }
        }
      },
      "gated_aggregate");
}

Var batch_norm(Var x, Var gamma, Var beta, BatchNormStats stats, bool training) {
  Tape& t = *x.tape;
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows(), d = xv.cols();
  if (gamma.value().size() != d || beta.value().size() != d || stats.running_mean->size() != d ||
      stats.running_var->size() != d) {
    throw ShapeMismatch("batch_norm: parameter width does not match " + xv.shape_string());
  }
  if (n == 0) throw ShapeMismatch("batch_norm: empty input");
  std::vector<double> mean(d), inv_std(d);
  if (training) {
    auto X = view(xv);
    for (std::size_t c = 0; c < d; ++c) {
      double m = X.col(c).mean();
      double var = (X.col(c).array() - m).square().mean();
      mean[c] = m;
      inv_std[c] = 1.0 / std::sqrt(var + stats.eps);
      double unbiased = n > 1 ? var * n / (n - 1) : var;
      (*stats.running_mean)[c] = (1 - stats.momentum) * (*stats.running_mean)[c] + stats.momentum * m;
      (*stats.running_var)[c] = (1 - stats.momentum) * (*stats.running_var)[c] + stats.momentum * unbiased;
    }
  } else {
    for (std::size_t c = 0; c < d; ++c) {
      mean[c] = (*stats.running_mean)[c];
      inv_std[c] = 1.0 / std::sqrt((*stats.running_var)[c] + stats.eps);
    }
  }
  Tensor xhat = Tensor::matrix(n, d);
  Tensor out = Tensor::matrix(n, d);
  const Tensor& gm = gamma.value();
  const Tensor& bt = beta.value();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double h = (xv(r, c) - mean[c]) * inv_std[c];
      xhat(r, c) = h;
      out(r, c) = gm[c] * h + bt[c];
    }
  }
  return t.record(
      std::move(out), any_grad(t, {x, gamma, beta}),
      [xi = x.id, gi = gamma.id, bi = beta.id, xhat = std::move(xhat), inv_std = std::move(inv_std),
       training, n, d](Tape& tape, const Tensor& g) {
        std::vector<double> sum_g(d, 0.0), sum_gx(d, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < d; ++c) {
            sum_g[c] += g(r, c);
            sum_gx[c] += g(r, c) * xhat(r, c);
          }
        }
        if (Tensor* gg = tape.grad_sink(gi)) {
          for (std::size_t c = 0; c < d; ++c) (*gg)[c] += sum_gx[c];
        }
        if (Tensor* gb = tape.grad_sink(bi)) {
          for (std::size_t c = 0; c < d; ++c) (*gb)[c] += sum_g[c];
        }
        if (Tensor* gx = tape.grad_sink(xi)) {
          const Tensor& gm = tape.value(gi);
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
              double scale = gm[c] * inv_std[c];
              if (training) {
                (*gx)(r, c) += scale * (g(r, c) - sum_g[c] / n - xhat(r, c) * sum_gx[c] / n);
              } else {
                (*gx)(r, c) += scale * g(r, c);
              }
            }
          }
        }
      },
      "batch_norm");
}

Var segment_max(Var x, std::span<const std::size_t> offsets) {
  Tape& t = *x.tape;
  const Tensor& xv = x.value();
  if (offsets.size() < 2 || offsets.back() != xv.rows()) {
    throw ShapeMismatch("segment_max: boundaries do not partition the rows");
  }
  const std::size_t b = offsets.size() - 1, d = xv.cols();
  Tensor out = Tensor::matrix(b, d);
  std::vector<std::size_t> arg(b * d);
  for (std::size_t s = 0; s < b; ++s) {
    if (offsets[s + 1] <= offsets[s]) throw EmptyGraph("segment_max: graph " + std::to_string(s) + " has no nodes");
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t best = offsets[s];
      for (std::size_t r = offsets[s] + 1; r < offsets[s + 1]; ++r) {
        if (xv(r, c) > xv(best, c)) best = r;
      }
      arg[s * d + c] = best;
      out(s, c) = xv(best, c);
    }
  }
  return t.record(
      std::move(out), t.requires_grad(x.id),
      [xi = x.id, arg, d](Tape& tape, const Tensor& g) {
        Tensor* gx = tape.grad_sink(xi);
        for (std::size_t i = 0; i < arg.size(); ++i) (*gx)(arg[i], i % d) += g[i];
      },
      "segment_max", arg);
}

Var mse(Var pred, std::span<const double> targets) {
  Tape& t = *pred.tape;
  const Tensor& pv = pred.value();
  if (pv.cols() != 1 || pv.rows() != targets.size() || targets.empty()) {
    throw ShapeMismatch("mse: prediction " + pv.shape_string() + " vs " + std::to_string(targets.size()) +
                        " targets");
  }
  std::vector<double> diff(targets.size());
  double sum = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    diff[i] = pv[i] - targets[i];
    sum += diff[i] * diff[i];
  }
  const double n = static_cast<double>(targets.size());
  return t.record(
      Tensor::matrix(1, 1, sum / n), t.requires_grad(pred.id),
      [pi = pred.id, diff = std::move(diff), n](Tape& tape, const Tensor& g) {
        Tensor* gp = tape.grad_sink(pi);
        for (std::size_t i = 0; i < diff.size(); ++i) (*gp)[i] += g[0] * 2.0 * diff[i] / n;
      },
      "mse");
}

}  // namespace tepgnn::gnn
