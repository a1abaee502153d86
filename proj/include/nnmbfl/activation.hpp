#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "nnmbfl/tensor.hpp"

namespace nnmbfl {

enum class Activation { linear, relu, sigmoid, tanh, softmax, elu };

inline constexpr std::array<Activation, 6> kAllActivations = {
    Activation::linear, Activation::relu,    Activation::sigmoid,
    Activation::tanh,   Activation::softmax, Activation::elu};

std::string_view to_string(Activation kind) noexcept;

/// Exact lowercase names only; "SoftMax" is rejected.
std::optional<Activation> parse_activation(std::string_view name) noexcept;

/// Scalar form for the elementwise kinds. Softmax is not elementwise and is
/// rejected with std::invalid_argument.
double activate(Activation kind, double x);

/// Applies `kind` to `x`. Softmax normalizes over the last axis using
/// max-subtraction; every other kind is elementwise.
Tensor apply_activation(Activation kind, Tensor x);

}  // namespace nnmbfl
