#include <string>

#include "nnmbfl/errors.hpp"
#include "nnmbfl/model.hpp"
#include "overloaded.hpp"

namespace nnmbfl {

namespace {

using detail::Overloaded;

std::string dims(const Shape& s) { return to_string(s); }

void expect_shape(const Tensor& t, const Shape& want, const char* what, std::size_t id) {
  if (t.shape() != want) {
    throw ShapeError(id, std::string(what) + " has shape " + dims(t.shape()) + ", expected " +
                             dims(want));
  }
}

std::size_t conv_extent(std::size_t in, std::size_t kernel, std::size_t stride, Padding padding,
                        std::size_t id) {
  if (padding == Padding::same) return (in + stride - 1) / stride;
  if (in < kernel) {
    throw ShapeError(id, "kernel extent " + std::to_string(kernel) + " exceeds input extent " +
                             std::to_string(in) + " under valid padding");
  }
  return (in - kernel) / stride + 1;
}

Shape dense_shape(const Dense& l, const Shape& in, std::size_t id) {
  if (l.units == 0) throw ShapeError(id, "units must be >= 1");
  if (l.weights.rank() != 2) throw ShapeError(id, "dense weights must be a matrix");
  expect_shape(l.bias, {l.units}, "bias", id);
  if (l.weights.shape()[1] != l.units) {
    throw ShapeError(id, "weights have " + std::to_string(l.weights.shape()[1]) +
                             " columns for " + std::to_string(l.units) + " units");
  }
  if (in.empty()) throw ShapeError(id, "dense layer needs an input of rank >= 1");
  if (in.back() != l.weights.shape()[0]) {
    throw ShapeError(id, "input width " + std::to_string(in.back()) + " does not match weight rows " +
                             std::to_string(l.weights.shape()[0]));
  }
  Shape out = in;
  out.back() = l.units;
  return out;
}

template <std::size_t D>
Shape conv_shape(const Conv<D>& l, const Shape& in, std::size_t id) {
  if (l.filters == 0) throw ShapeError(id, "filters must be >= 1");
  if (in.size() != D + 1) {
    throw ShapeError(id, "conv" + std::to_string(D) + "d expects rank " + std::to_string(D + 1) +
                             " input, got " + dims(in));
  }
  Shape wshape;
  for (std::size_t d = 0; d < D; ++d) {
    if (l.kernel_size[d] == 0) throw ShapeError(id, "kernel size must be >= 1");
    if (l.strides[d] == 0) throw ShapeError(id, "strides must be >= 1");
    wshape.push_back(l.kernel_size[d]);
  }
  wshape.push_back(in.back());
  wshape.push_back(l.filters);
  expect_shape(l.weights, wshape, "weights", id);
  expect_shape(l.bias, {l.filters}, "bias", id);
  Shape out;
  for (std::size_t d = 0; d < D; ++d)
    out.push_back(conv_extent(in[d], l.kernel_size[d], l.strides[d], l.padding, id));
  out.push_back(l.filters);
  return out;
}

template <std::size_t D>
Shape pool_shape(const MaxPool<D>& l, const Shape& in, std::size_t id) {
  if (in.size() != D + 1) {
    throw ShapeError(id, "maxpool" + std::to_string(D) + "d expects rank " +
                             std::to_string(D + 1) + " input, got " + dims(in));
  }
  Shape out;
  for (std::size_t d = 0; d < D; ++d) {
    if (l.pool_size[d] == 0) throw ShapeError(id, "pool size must be >= 1");
    if (l.strides[d] == 0) throw ShapeError(id, "strides must be >= 1");
    out.push_back(conv_extent(in[d], l.pool_size[d], l.strides[d], Padding::valid, id));
  }
  out.push_back(in.back());
  return out;
}

void recurrent_input(const Shape& in, std::size_t id) {
  if (in.size() != 2 || in[0] == 0) {
    throw ShapeError(id, "recurrent layer expects [timesteps, features] input, got " + dims(in));
  }
}

void gate_shapes(const Tensor& kernel, const Tensor& recurrent, const Tensor& bias,
                 std::size_t features, std::size_t units, const std::string& what,
                 std::size_t id) {
  expect_shape(kernel, {features, units}, (what + "kernel").c_str(), id);
  expect_shape(recurrent, {units, units}, (what + "recurrent kernel").c_str(), id);
  expect_shape(bias, {units}, (what + "bias").c_str(), id);
}

}  // namespace

Shape output_shape(const Layer& layer, const Shape& in, std::size_t id) {
  return std::visit(
      Overloaded{
          [&](const Dense& l) { return dense_shape(l, in, id); },
          [&](const Conv1D& l) { return conv_shape(l, in, id); },
          [&](const Conv2D& l) { return conv_shape(l, in, id); },
          [&](const MaxPool1D& l) { return pool_shape(l, in, id); },
          [&](const MaxPool2D& l) { return pool_shape(l, in, id); },
          [&](const Flatten&) {
            if (in.empty()) throw ShapeError(id, "flatten needs an input of rank >= 1");
            return Shape{element_count(in)};
          },
          [&](const Dropout& l) {
            if (!(l.rate >= 0.0 && l.rate < 1.0)) throw ShapeError(id, "dropout rate must be in [0, 1)");
            return in;
          },
          [&](const BatchNorm& l) {
            if (in.empty()) throw ShapeError(id, "batch normalization needs an input of rank >= 1");
            const Shape channels{in.back()};
            expect_shape(l.gamma, channels, "gamma", id);
            expect_shape(l.beta, channels, "beta", id);
            expect_shape(l.moving_mean, channels, "moving mean", id);
            expect_shape(l.moving_variance, channels, "moving variance", id);
            if (!(l.epsilon >= 0.0)) throw ShapeError(id, "epsilon must be non-negative");
            return in;
          },
          [&](const SimpleRNN& l) {
            if (l.units == 0) throw ShapeError(id, "units must be >= 1");
            recurrent_input(in, id);
            gate_shapes(l.kernel, l.recurrent_kernel, l.bias, in[1], l.units, "", id);
            return Shape{l.units};
          },
          [&](const LSTM& l) {
            if (l.units == 0) throw ShapeError(id, "units must be >= 1");
            recurrent_input(in, id);
            gate_shapes(l.input.kernel, l.input.recurrent_kernel, l.input.bias, in[1], l.units,
                        "input gate ", id);
            gate_shapes(l.forget.kernel, l.forget.recurrent_kernel, l.forget.bias, in[1], l.units,
                        "forget gate ", id);
            gate_shapes(l.cell.kernel, l.cell.recurrent_kernel, l.cell.bias, in[1], l.units,
                        "cell gate ", id);
            gate_shapes(l.output.kernel, l.output.recurrent_kernel, l.output.bias, in[1], l.units,
                        "output gate ", id);
            return Shape{l.units};
          },
      },
      layer);
}

std::vector<Shape> validate_shapes(const SequentialModel& model) {
  if (model.layers.empty()) throw ShapeError(0, "model has no layers");
  if (model.input_shape.empty()) throw ShapeError(0, "input shape is empty");
  for (std::size_t d : model.input_shape)
    if (d == 0) throw ShapeError(0, "input dimensions must be >= 1");
  std::vector<Shape> chain;
  chain.reserve(model.layers.size());
  const Shape* current = &model.input_shape;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    chain.push_back(output_shape(model.layers[i], *current, i + 1));
    current = &chain.back();
  }
  return chain;
}

bool is_viable(const SequentialModel& model) noexcept {
  try {
    validate_shapes(model);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::size_t SequentialModel::parameter_count() const noexcept {
  std::size_t total = 0;
  for (const auto& l : layers) total += nnmbfl::parameter_count(l);
  return total;
}

}  // namespace nnmbfl
