#pragma once

#include <vector>

#include "tepgnn/gnn/autograd.hpp"

namespace tepgnn::gnn {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias-corrected moments. Moment state starts at zero.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config = {});

  /// Applies one update from the accumulated gradients.
  void step();
  void zero_grad();
  std::size_t steps() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Tensor> m_, v_;
  std::size_t t_ = 0;
};

}  // namespace tepgnn::gnn
