#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>

#include "nnmbfl/activation.hpp"
#include "nnmbfl/tensor.hpp"

namespace nnmbfl {

enum class Padding { valid, same };

std::string_view to_string(Padding padding) noexcept;

/// Fully connected layer over the last axis. weights: [in, units].
struct Dense {
  std::size_t units = 0;
  Tensor weights;
  Tensor bias;
  Activation activation = Activation::linear;

  bool operator==(const Dense&) const = default;
};

/// Cross-correlation over `Dims` spatial axes of a channels-last input.
/// weights: [k_1, ..., k_Dims, in_channels, filters]; bias: [filters].
template <std::size_t Dims>
struct Conv {
  std::size_t filters = 0;
  std::array<std::size_t, Dims> kernel_size{};
  std::array<std::size_t, Dims> strides{};
  Padding padding = Padding::valid;
  Tensor weights;
  Tensor bias;
  Activation activation = Activation::linear;

  bool operator==(const Conv&) const = default;
};

using Conv1D = Conv<1>;
using Conv2D = Conv<2>;

/// Max pooling with valid padding over `Dims` spatial axes.
template <std::size_t Dims>
struct MaxPool {
  std::array<std::size_t, Dims> pool_size{};
  std::array<std::size_t, Dims> strides{};

  bool operator==(const MaxPool&) const = default;
};

using MaxPool1D = MaxPool<1>;
using MaxPool2D = MaxPool<2>;

struct Flatten {
  bool operator==(const Flatten&) const = default;
};

/// Identity at inference time.
struct Dropout {
  double rate = 0.0;

  bool operator==(const Dropout&) const = default;
};

/// Inference-mode batch normalization over the last axis.
struct BatchNorm {
  Tensor gamma;
  Tensor beta;
  Tensor moving_mean;
  Tensor moving_variance;
  double epsilon = 1e-3;

  bool operator==(const BatchNorm&) const = default;
};

/// Input [timesteps, features]; returns the final hidden state [units].
struct SimpleRNN {
  std::size_t units = 0;
  Tensor kernel;            // [features, units]
  Tensor recurrent_kernel;  // [units, units]
  Tensor bias;              // [units]
  Activation activation = Activation::tanh;

  bool operator==(const SimpleRNN&) const = default;
};

struct LstmGate {
  Tensor kernel;            // [features, units]
  Tensor recurrent_kernel;  // [units, units]
  Tensor bias;              // [units]

  bool operator==(const LstmGate&) const = default;
};

/// Input [timesteps, features]; returns the final hidden state [units].
/// Gates use `recurrent_activation`; the candidate cell and the output
/// squashing use `activation`.
struct LSTM {
  std::size_t units = 0;
  LstmGate input;
  LstmGate forget;
  LstmGate cell;
  LstmGate output;
  Activation activation = Activation::tanh;
  Activation recurrent_activation = Activation::sigmoid;

  bool operator==(const LSTM&) const = default;
};

using Layer = std::variant<Dense, Conv1D, Conv2D, MaxPool1D, MaxPool2D, Flatten,
                           Dropout, BatchNorm, SimpleRNN, LSTM>;

/// Lowercase kind tag used in model files and reports ("dense", "conv2d", ...).
std::string_view layer_kind(const Layer& layer) noexcept;

std::size_t parameter_count(const Layer& layer) noexcept;

}  // namespace nnmbfl
