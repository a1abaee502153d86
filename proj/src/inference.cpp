#include <cmath>
#include <limits>

#include "nnmbfl/errors.hpp"
#include "nnmbfl/model.hpp"
#include "overloaded.hpp"

namespace nnmbfl {

namespace {

using detail::Overloaded;

Tensor dense_forward(const Dense& l, const Tensor& x, const Shape& out_shape) {
  const std::size_t in = l.weights.shape()[0];
  const std::size_t units = l.units;
  const std::size_t rows = x.size() / in;
  Tensor y = Tensor::zeros(out_shape);
  const auto w = l.weights.values();
  const auto b = l.bias.values();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t u = 0; u < units; ++u) {
      double acc = b[u];
      for (std::size_t i = 0; i < in; ++i) acc += x[r * in + i] * w[i * units + u];
      y[r * units + u] = acc;
    }
  }
  return apply_activation(l.activation, std::move(y));
}

// 1-D layers are run through the 2-D kernels with a unit leading axis.
struct Grid {
  std::size_t in_h, in_w, channels;
  std::size_t k_h, k_w, s_h, s_w;
  std::size_t pad_top, pad_left;
  std::size_t out_h, out_w;
};

std::size_t leading_pad(std::size_t in, std::size_t out, std::size_t kernel, std::size_t stride) {
  const std::size_t needed = (out - 1) * stride + kernel;
  // Odd totals put the extra cell on the trailing side.
  return needed > in ? (needed - in) / 2 : 0;
}

template <std::size_t D>
Grid make_grid(const Shape& in, const Shape& out, const std::array<std::size_t, D>& kernel,
               const std::array<std::size_t, D>& strides, Padding padding) {
  Grid g{};
  if constexpr (D == 1) {
    g = {1, in[0], in[1], 1, kernel[0], 1, strides[0], 0, 0, 1, out[0]};
    if (padding == Padding::same) g.pad_left = leading_pad(g.in_w, g.out_w, g.k_w, g.s_w);
  } else {
    g = {in[0], in[1], in[2], kernel[0], kernel[1], strides[0], strides[1], 0, 0, out[0], out[1]};
    if (padding == Padding::same) {
      g.pad_top = leading_pad(g.in_h, g.out_h, g.k_h, g.s_h);
      g.pad_left = leading_pad(g.in_w, g.out_w, g.k_w, g.s_w);
    }
  }
  return g;
}

template <std::size_t D>
Tensor conv_forward(const Conv<D>& l, const Tensor& x, const Shape& out_shape) {
  const Grid g = make_grid<D>(x.shape(), out_shape, l.kernel_size, l.strides, l.padding);
  const std::size_t filters = l.filters;
  Tensor y = Tensor::zeros(out_shape);
  const auto w = l.weights.values();
  const auto b = l.bias.values();
  for (std::size_t oh = 0; oh < g.out_h; ++oh) {
    for (std::size_t ow = 0; ow < g.out_w; ++ow) {
      for (std::size_t f = 0; f < filters; ++f) {
        double acc = b[f];
        for (std::size_t kh = 0; kh < g.k_h; ++kh) {
          const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(oh * g.s_h + kh) -
                                    static_cast<std::ptrdiff_t>(g.pad_top);
          if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
          for (std::size_t kw = 0; kw < g.k_w; ++kw) {
            const std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(ow * g.s_w + kw) -
                                      static_cast<std::ptrdiff_t>(g.pad_left);
            if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
            const std::size_t xbase =
                (static_cast<std::size_t>(ih) * g.in_w + static_cast<std::size_t>(iw)) * g.channels;
            const std::size_t wbase = (kh * g.k_w + kw) * g.channels;
            for (std::size_t c = 0; c < g.channels; ++c)
              acc += x[xbase + c] * w[(wbase + c) * filters + f];
          }
        }
        y[(oh * g.out_w + ow) * filters + f] = acc;
      }
    }
  }
  return apply_activation(l.activation, std::move(y));
}

template <std::size_t D>
Tensor pool_forward(const MaxPool<D>& l, const Tensor& x, const Shape& out_shape) {
  const Grid g = make_grid<D>(x.shape(), out_shape, l.pool_size, l.strides, Padding::valid);
  Tensor y = Tensor::zeros(out_shape);
  for (std::size_t oh = 0; oh < g.out_h; ++oh) {
    for (std::size_t ow = 0; ow < g.out_w; ++ow) {
      for (std::size_t c = 0; c < g.channels; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t kh = 0; kh < g.k_h; ++kh) {
          for (std::size_t kw = 0; kw < g.k_w; ++kw) {
            const double v = x[((oh * g.s_h + kh) * g.in_w + ow * g.s_w + kw) * g.channels + c];
            if (std::isnan(v) || v > best) best = v;
            if (std::isnan(best)) break;
          }
          if (std::isnan(best)) break;
        }
        y[(oh * g.out_w + ow) * g.channels + c] = best;
      }
    }
  }
  return y;
}

Tensor batchnorm_forward(const BatchNorm& l, Tensor x) {
  const std::size_t channels = l.gamma.size();
  auto v = x.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t c = i % channels;
    v[i] = l.gamma[c] * (v[i] - l.moving_mean[c]) / std::sqrt(l.moving_variance[c] + l.epsilon) +
           l.beta[c];
  }
  return x;
}

// pre[u] = bias[u] + x_t . kernel[:, u] + h . recurrent[:, u]
std::vector<double> gate_preactivation(const Tensor& kernel, const Tensor& recurrent,
                                       const Tensor& bias, std::span<const double> x_t,
                                       const std::vector<double>& h) {
  const std::size_t units = bias.size();
  std::vector<double> pre(bias.values().begin(), bias.values().end());
  for (std::size_t i = 0; i < x_t.size(); ++i)
    for (std::size_t u = 0; u < units; ++u) pre[u] += x_t[i] * kernel[i * units + u];
  for (std::size_t j = 0; j < units; ++j)
    for (std::size_t u = 0; u < units; ++u) pre[u] += h[j] * recurrent[j * units + u];
  return pre;
}

std::vector<double> activated(Activation kind, std::vector<double> v) {
  Tensor t = apply_activation(kind, Tensor::vector(std::move(v)));
  return {t.values().begin(), t.values().end()};
}

Tensor rnn_forward(const SimpleRNN& l, const Tensor& x) {
  const std::size_t steps = x.shape()[0];
  const std::size_t features = x.shape()[1];
  std::vector<double> h(l.units, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto x_t = x.values().subspan(t * features, features);
    h = activated(l.activation, gate_preactivation(l.kernel, l.recurrent_kernel, l.bias, x_t, h));
  }
  return Tensor::vector(std::move(h));
}

Tensor lstm_forward(const LSTM& l, const Tensor& x) {
  const std::size_t steps = x.shape()[0];
  const std::size_t features = x.shape()[1];
  std::vector<double> h(l.units, 0.0);
  std::vector<double> c(l.units, 0.0);
  auto gate = [&](const LstmGate& g, Activation kind, std::span<const double> x_t) {
    return activated(kind, gate_preactivation(g.kernel, g.recurrent_kernel, g.bias, x_t, h));
  };
  for (std::size_t t = 0; t < steps; ++t) {
    const auto x_t = x.values().subspan(t * features, features);
    const auto i = gate(l.input, l.recurrent_activation, x_t);
    const auto f = gate(l.forget, l.recurrent_activation, x_t);
    const auto candidate = gate(l.cell, l.activation, x_t);
    const auto o = gate(l.output, l.recurrent_activation, x_t);
    for (std::size_t u = 0; u < l.units; ++u) c[u] = f[u] * c[u] + i[u] * candidate[u];
    const auto squashed = activated(l.activation, c);
    for (std::size_t u = 0; u < l.units; ++u) h[u] = o[u] * squashed[u];
  }
  return Tensor::vector(std::move(h));
}

Tensor run_layer(const Layer& layer, const Tensor& x, const Shape& out_shape) {
  return std::visit(Overloaded{
                        [&](const Dense& l) { return dense_forward(l, x, out_shape); },
                        [&](const Conv1D& l) { return conv_forward(l, x, out_shape); },
                        [&](const Conv2D& l) { return conv_forward(l, x, out_shape); },
                        [&](const MaxPool1D& l) { return pool_forward(l, x, out_shape); },
                        [&](const MaxPool2D& l) { return pool_forward(l, x, out_shape); },
                        [&](const Flatten&) { return x.reshaped(out_shape); },
                        [&](const Dropout&) { return x; },
                        [&](const BatchNorm& l) { return batchnorm_forward(l, x); },
                        [&](const SimpleRNN& l) { return rnn_forward(l, x); },
                        [&](const LSTM& l) { return lstm_forward(l, x); },
                    },
                    layer);
}

}  // namespace

Tensor forward_layer(const Layer& layer, const Tensor& input, std::size_t layer_id) {
  const Shape out_shape = output_shape(layer, input.shape(), layer_id);
  return run_layer(layer, input, out_shape);
}

Tensor forward(const SequentialModel& model, const Tensor& input) {
  if (model.layers.empty()) throw ShapeError(0, "model has no layers");
  if (input.shape() != model.input_shape) {
    throw ShapeError(0, "input has shape " + to_string(input.shape()) + ", model expects " +
                            to_string(model.input_shape));
  }
  Tensor x = input;
  for (std::size_t i = 0; i < model.layers.size(); ++i)
    x = forward_layer(model.layers[i], x, i + 1);
  return x;
}

Inference infer(const SequentialModel& model, const Tensor& input) {
  Inference result{forward(model, input), false};
  result.numeric_warning = has_non_finite(result.output);
  return result;
}

}  // namespace nnmbfl
