#include "tepgnn/gnn/adam.hpp"

#include <cmath>

namespace tepgnn::gnn {

Adam::Adam(std::vector<Parameter*> params, AdamConfig config) : params_(std::move(params)), config_(config) {
  for (auto* p : params_) {
    m_.emplace_back(p->value.shape(), 0.0);
    v_.emplace_back(p->value.shape(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor& w = params_[i]->value;
    const Tensor& g = params_[i]->grad;
    Tensor& m = m_[i];
    Tensor& v = v_[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = config_.beta1 * m[j] + (1 - config_.beta1) * g[j];
      v[j] = config_.beta2 * v[j] + (1 - config_.beta2) * g[j] * g[j];
      w[j] -= config_.lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + config_.eps);
    }
    if (!w.all_finite()) throw NonFiniteValue("adam update made " + params_[i]->name + " non-finite");
  }
}

void Adam::zero_grad() {
  for (auto* p : params_) p->zero_grad();
}

}  // namespace tepgnn::gnn
