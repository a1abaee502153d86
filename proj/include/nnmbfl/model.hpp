#pragma once

#include <cstddef>
#include <vector>

#include "nnmbfl/layers.hpp"
#include "nnmbfl/tensor.hpp"

namespace nnmbfl {

/// A linear chain of layers. Layer ids are 1-based positions in `layers`.
struct SequentialModel {
  Shape input_shape;
  std::vector<Layer> layers;

  std::size_t parameter_count() const noexcept;

  const Layer& layer(std::size_t layer_id) const { return layers.at(layer_id - 1); }
  Layer& layer(std::size_t layer_id) { return layers.at(layer_id - 1); }

  bool operator==(const SequentialModel&) const = default;
};

/// Output shape of every layer in order, or ShapeError naming the first
/// layer whose parameters do not fit its input.
std::vector<Shape> validate_shapes(const SequentialModel& model);

/// Non-throwing form of validate_shapes.
bool is_viable(const SequentialModel& model) noexcept;

/// Output shape of a single layer given its input shape. Throws ShapeError
/// carrying `layer_id`.
Shape output_shape(const Layer& layer, const Shape& input, std::size_t layer_id);

struct Inference {
  Tensor output;
  bool numeric_warning = false;  // NaN or Inf in output
};

/// Deterministic inference. Throws ShapeError when `input` does not match the
/// model input shape or a layer cannot consume what reaches it.
Tensor forward(const SequentialModel& model, const Tensor& input);

Inference infer(const SequentialModel& model, const Tensor& input);

/// Runs one layer. Exposed for tests that check per-layer properties.
Tensor forward_layer(const Layer& layer, const Tensor& input, std::size_t layer_id);

}  // namespace nnmbfl
