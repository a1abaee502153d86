#include "nnmbfl/layers.hpp"

#include "overloaded.hpp"

namespace nnmbfl {

std::string_view to_string(Padding padding) noexcept {
  return padding == Padding::same ? "same" : "valid";
}

namespace {

using detail::Overloaded;

std::size_t gate_parameters(const LstmGate& g) noexcept {
  return g.kernel.size() + g.recurrent_kernel.size() + g.bias.size();
}

}  // namespace

std::string_view layer_kind(const Layer& layer) noexcept {
  return std::visit(Overloaded{
                        [](const Dense&) { return std::string_view("dense"); },
                        [](const Conv1D&) { return std::string_view("conv1d"); },
                        [](const Conv2D&) { return std::string_view("conv2d"); },
                        [](const MaxPool1D&) { return std::string_view("maxpool1d"); },
                        [](const MaxPool2D&) { return std::string_view("maxpool2d"); },
                        [](const Flatten&) { return std::string_view("flatten"); },
                        [](const Dropout&) { return std::string_view("dropout"); },
                        [](const BatchNorm&) { return std::string_view("batchnorm"); },
                        [](const SimpleRNN&) { return std::string_view("simplernn"); },
                        [](const LSTM&) { return std::string_view("lstm"); },
                    },
                    layer);
}

std::size_t parameter_count(const Layer& layer) noexcept {
  return std::visit(
      Overloaded{
          [](const Dense& l) { return l.weights.size() + l.bias.size(); },
          [](const Conv1D& l) { return l.weights.size() + l.bias.size(); },
          [](const Conv2D& l) { return l.weights.size() + l.bias.size(); },
          [](const BatchNorm& l) {
            return l.gamma.size() + l.beta.size() + l.moving_mean.size() +
                   l.moving_variance.size();
          },
          [](const SimpleRNN& l) {
            return l.kernel.size() + l.recurrent_kernel.size() + l.bias.size();
          },
          [](const LSTM& l) {
            return gate_parameters(l.input) + gate_parameters(l.forget) +
                   gate_parameters(l.cell) + gate_parameters(l.output);
          },
          [](const auto&) { return std::size_t{0}; },
      },
      layer);
}

}  // namespace nnmbfl
