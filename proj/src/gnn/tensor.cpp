#include "tepgnn/gnn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace tepgnn::gnn {

namespace {
std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(product(shape_), fill) {
  if (shape_.empty() || shape_.size() > 2) throw ShapeMismatch("tensors are rank 1 or 2");
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty() || shape_.size() > 2) throw ShapeMismatch("tensors are rank 1 or 2");
  if (data_.size() != product(shape_)) {
    throw ShapeMismatch("data length " + std::to_string(data_.size()) + " does not match shape " +
                        shape_string());
  }
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace tepgnn::gnn
