#include "nnmbfl/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nnmbfl {

std::string_view to_string(Activation kind) noexcept {
  switch (kind) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::softmax: return "softmax";
    case Activation::elu: return "elu";
  }
  return "linear";
}

std::optional<Activation> parse_activation(std::string_view name) noexcept {
  for (Activation kind : kAllActivations)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

double activate(Activation kind, double x) {
  switch (kind) {
    case Activation::linear: return x;
    // NaN passes through relu unchanged.
    case Activation::relu: return x < 0.0 ? 0.0 : x;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::tanh: return std::tanh(x);
    case Activation::elu: return x > 0.0 ? x : std::expm1(x);
    case Activation::softmax: break;
  }
  throw std::invalid_argument("softmax is not an elementwise activation");
}

namespace {

void softmax_last_axis(Tensor& x) {
  if (x.empty()) return;
  const std::size_t width = x.shape().empty() ? 1 : x.shape().back();
  if (width == 0) return;
  auto values = x.values();
  for (std::size_t row = 0; row < values.size(); row += width) {
    auto slice = values.subspan(row, width);
    double top = -std::numeric_limits<double>::infinity();
    for (double v : slice) top = std::max(top, v);
    // All -inf (or NaN) rows: fall through and let NaN propagate.
    double sum = 0.0;
    for (double& v : slice) {
      v = std::exp(v - top);
      sum += v;
    }
    for (double& v : slice) v /= sum;
  }
}

}  // namespace

Tensor apply_activation(Activation kind, Tensor x) {
  if (kind == Activation::softmax) {
    softmax_last_axis(x);
    return x;
  }
  if (kind == Activation::linear) return x;
  for (double& v : x.values()) v = activate(kind, v);
  return x;
}

}  // namespace nnmbfl
