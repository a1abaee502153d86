#include "nnmbfl/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "nnmbfl/errors.hpp"
#include "overloaded.hpp"

namespace nnmbfl {

namespace {

using detail::Overloaded;

constexpr std::array<std::string_view, kMutatorClassCount> kClassNames = {
    "MATH_WEIGHT",         "MATH_WEIGHT_CONV",      "MATH_ACT_WEIGHT",
    "MATH_LSTM_IN_WEIGHT", "MATH_LSTM_FORGET_WEIGHT", "MATH_LSTM_CELL_WEIGHT",
    "MATH_LSTM_OUT_WEIGHT", "MATH_BIAS",             "DEL_LAYER",
    "DUP_LAYER",           "MATH_CONV_BIAS",        "MATH_LSTM_IN_BIAS",
    "MATH_LSTM_FORGET_BIAS", "MATH_LSTM_CELL_BIAS", "MATH_LSTM_OUT_BIAS",
    "ACT_FUNC_REP",        "MATH_POOL_SZ",          "MATH_STRIDES",
    "MATH_KERNEL_SZ",      "MATH_FILTERS",          "PADDING_REP",
    "REC_ACT_FUNC_REP",
};

// How a class enumerates its operations on one layer.
enum class Family { math_per_neuron, math_whole, structural, activation, size, padding };

Family family_of(MutatorClass c) {
  switch (c) {
    case MutatorClass::math_weight:
    case MutatorClass::math_bias: return Family::math_per_neuron;
    case MutatorClass::del_layer:
    case MutatorClass::dup_layer: return Family::structural;
    case MutatorClass::act_func_rep:
    case MutatorClass::rec_act_func_rep: return Family::activation;
    case MutatorClass::math_pool_sz:
    case MutatorClass::math_strides:
    case MutatorClass::math_kernel_sz:
    case MutatorClass::math_filters: return Family::size;
    case MutatorClass::padding_rep: return Family::padding;
    default: return Family::math_whole;
  }
}

std::string_view math_target_name(MutatorClass c) {
  switch (c) {
    case MutatorClass::math_weight: return "the weights";
    case MutatorClass::math_weight_conv: return "the convolution weights";
    case MutatorClass::math_act_weight: return "the recurrent weights";
    case MutatorClass::math_lstm_in_weight: return "the input gate weights";
    case MutatorClass::math_lstm_forget_weight: return "the forget gate weights";
    case MutatorClass::math_lstm_cell_weight: return "the cell gate weights";
    case MutatorClass::math_lstm_out_weight: return "the output gate weights";
    case MutatorClass::math_bias: return "the bias";
    case MutatorClass::math_conv_bias: return "the convolution bias";
    case MutatorClass::math_lstm_in_bias: return "the input gate bias";
    case MutatorClass::math_lstm_forget_bias: return "the forget gate bias";
    case MutatorClass::math_lstm_cell_bias: return "the cell gate bias";
    case MutatorClass::math_lstm_out_bias: return "the output gate bias";
    case MutatorClass::math_pool_sz: return "the pool size";
    case MutatorClass::math_strides: return "the strides";
    case MutatorClass::math_kernel_sz: return "the kernel size";
    case MutatorClass::math_filters: return "the filters";
    default: return "";
  }
}

// Layer facts the generator needs, independent of the concrete kind.
struct LayerTraits {
  std::vector<MutatorClass> classes;
  std::size_t neurons = 0;
  std::optional<Activation> activation;
  std::optional<Activation> recurrent_activation;
  std::optional<Padding> padding;
  // Smallest hyperparameter value per size class; dec1 is emitted only when
  // every dimension stays >= 1.
  std::map<MutatorClass, std::size_t> smallest;
};

template <std::size_t D>
std::size_t smallest_of(const std::array<std::size_t, D>& a) {
  return *std::min_element(a.begin(), a.end());
}

LayerTraits traits_of(const Layer& layer) {
  using C = MutatorClass;
  return std::visit(
      Overloaded{
          [](const Dense& l) {
            LayerTraits t;
            t.classes = {C::math_weight, C::math_bias, C::del_layer, C::dup_layer, C::act_func_rep};
            t.neurons = l.units;
            t.activation = l.activation;
            return t;
          },
          [](const SimpleRNN& l) {
            LayerTraits t;
            t.classes = {C::math_weight, C::math_act_weight, C::math_bias, C::act_func_rep};
            t.neurons = l.units;
            t.activation = l.activation;
            return t;
          },
          [](const LSTM& l) {
            LayerTraits t;
            t.classes = {C::math_lstm_in_weight,   C::math_lstm_forget_weight, C::math_lstm_cell_weight,
                         C::math_lstm_out_weight,  C::math_lstm_in_bias,       C::math_lstm_forget_bias,
                         C::math_lstm_cell_bias,   C::math_lstm_out_bias,      C::act_func_rep,
                         C::rec_act_func_rep};
            t.neurons = l.units;
            t.activation = l.activation;
            t.recurrent_activation = l.recurrent_activation;
            return t;
          },
          [](const auto& l) -> LayerTraits {
            using T = std::decay_t<decltype(l)>;
            LayerTraits t;
            if constexpr (std::is_same_v<T, Conv1D> || std::is_same_v<T, Conv2D>) {
              t.classes = {C::math_weight_conv, C::math_conv_bias, C::act_func_rep, C::math_strides,
                           C::math_kernel_sz,   C::math_filters,   C::padding_rep};
              t.activation = l.activation;
              t.padding = l.padding;
              t.smallest[C::math_strides] = smallest_of(l.strides);
              t.smallest[C::math_kernel_sz] = smallest_of(l.kernel_size);
              t.smallest[C::math_filters] = l.filters;
            } else if constexpr (std::is_same_v<T, MaxPool1D> || std::is_same_v<T, MaxPool2D>) {
              t.classes = {C::math_pool_sz, C::math_strides};
              t.smallest[C::math_pool_sz] = smallest_of(l.pool_size);
              t.smallest[C::math_strides] = smallest_of(l.strides);
            }
            return t;
          },
      },
      layer);
}

std::string located(std::string text, std::size_t layer_id, std::optional<std::size_t> neuron) {
  text += " of layer " + std::to_string(layer_id);
  if (neuron) text += ", neuron " + std::to_string(*neuron);
  return text;
}

std::string math_phrase(MathOp op, std::string_view target) {
  const std::string t(target);
  switch (op) {
    case MathOp::add1: return "added 1 to " + t;
    case MathOp::sub1: return "subtracted 1 from " + t;
    case MathOp::mul2: return "doubled " + t;
    case MathOp::div2: return "halved " + t;
  }
  return t;
}

std::string describe(const MutantDescriptor& d, const LayerTraits& traits) {
  const auto id = d.layer_id;
  switch (family_of(d.mutator)) {
    case Family::math_per_neuron:
    case Family::math_whole:
      return located(math_phrase(std::get<MathOp>(d.operation), math_target_name(d.mutator)), id,
                     d.neuron_index);
    case Family::structural:
      return (d.mutator == MutatorClass::del_layer ? "deleted layer " : "duplicated layer ") +
             std::to_string(id);
    case Family::activation: {
      const bool recurrent = d.mutator == MutatorClass::rec_act_func_rep;
      const Activation from = recurrent ? *traits.recurrent_activation : *traits.activation;
      std::string text = recurrent ? "replaced recurrent activation function '"
                                   : "replaced activation function '";
      text += std::string(to_string(from)) + "' with '" +
              std::string(to_string(std::get<Activation>(d.operation))) + "'";
      return located(std::move(text), id, d.neuron_index);
    }
    case Family::size:
      return located((std::get<SizeOp>(d.operation) == SizeOp::inc1 ? "incremented "
                                                                     : "decremented ") +
                         std::string(math_target_name(d.mutator)),
                     id, std::nullopt);
    case Family::padding: {
      const bool valid = *traits.padding == Padding::valid;
      return located(std::string("replaced padding '") + (valid ? "valid" : "same") + "' with '" +
                         (valid ? "same" : "valid") + "'",
                     id, std::nullopt);
    }
  }
  return {};
}

void emit(std::vector<MutantDescriptor>& pool, std::size_t layer_id, std::optional<std::size_t> neuron,
          MutatorClass mutator, MutationOperation op, const LayerTraits& traits) {
  MutantDescriptor d;
  d.id = pool.size() + 1;
  d.layer_id = layer_id;
  d.neuron_index = neuron;
  d.mutator = mutator;
  d.operation = op;
  d.description = describe(d, traits);
  pool.push_back(std::move(d));
}

void generate_full(std::vector<MutantDescriptor>& pool, std::size_t layer_id,
                   const LayerTraits& traits) {
  for (MutatorClass c : traits.classes) {
    switch (family_of(c)) {
      case Family::math_per_neuron:
        for (std::size_t n = 1; n <= traits.neurons; ++n)
          for (MathOp op : kMathOps) emit(pool, layer_id, n, c, op, traits);
        break;
      case Family::math_whole:
        for (MathOp op : kMathOps) emit(pool, layer_id, std::nullopt, c, op, traits);
        break;
      case Family::structural:
      case Family::padding:
        emit(pool, layer_id, std::nullopt, c, std::monostate{}, traits);
        break;
      case Family::activation: {
        const Activation current = c == MutatorClass::rec_act_func_rep ? *traits.recurrent_activation
                                                                       : *traits.activation;
        for (Activation alt : kAllActivations)
          if (alt != current) emit(pool, layer_id, std::nullopt, c, alt, traits);
        break;
      }
      case Family::size:
        emit(pool, layer_id, std::nullopt, c, SizeOp::inc1, traits);
        if (traits.smallest.at(c) >= 2) emit(pool, layer_id, std::nullopt, c, SizeOp::dec1, traits);
        break;
    }
  }
}

void generate_demo(std::vector<MutantDescriptor>& pool, std::size_t layer_id, const Layer& layer,
                   const LayerTraits& traits) {
  if (!std::holds_alternative<Dense>(layer)) return;
  const Activation swapped =
      *traits.activation == Activation::softmax ? Activation::relu : Activation::softmax;
  for (std::size_t n = 1; n <= traits.neurons; ++n) {
    emit(pool, layer_id, n, MutatorClass::math_weight, MathOp::div2, traits);
    emit(pool, layer_id, n, MutatorClass::math_bias, MathOp::div2, traits);
    emit(pool, layer_id, n, MutatorClass::act_func_rep, swapped, traits);
  }
}

double apply_math(MathOp op, double w) {
  switch (op) {
    case MathOp::add1: return w + 1.0;
    case MathOp::sub1: return w - 1.0;
    case MathOp::mul2: return w * 2.0;
    case MathOp::div2: return w / 2.0;
  }
  return w;
}

void mutate_all(Tensor& t, MathOp op) {
  for (double& w : t.values()) w = apply_math(op, w);
}

// Column `neuron` (0-based) of a [rows, units] matrix.
void mutate_column(Tensor& t, std::size_t neuron, MathOp op) {
  const std::size_t units = t.shape().back();
  for (std::size_t i = neuron; i < t.size(); i += units) t[i] = apply_math(op, t[i]);
}

// Copies `t` into `shape`. Along each axis the old data is offset by
// `shift[d]` (center-crop when shrinking, trailing zero-pad when growing
// by one); cells with no source are zero.
Tensor resize(const Tensor& t, const Shape& shape, const std::vector<std::size_t>& shift) {
  Tensor out = Tensor::zeros(shape);
  const Shape& old = t.shape();
  const std::size_t rank = shape.size();
  std::vector<std::size_t> idx(rank, 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = rank; d-- > 0;) {
      idx[d] = rem % shape[d];
      rem /= shape[d];
    }
    std::size_t src = 0;
    bool inside = true;
    for (std::size_t d = 0; d < rank; ++d) {
      const std::size_t o = idx[d] + shift[d];
      if (o >= old[d]) {
        inside = false;
        break;
      }
      src = src * old[d] + o;
    }
    if (inside) out[flat] = t[src];
  }
  return out;
}

std::size_t stepped(std::size_t v, SizeOp op) { return op == SizeOp::inc1 ? v + 1 : v - 1; }

template <std::size_t D>
void step_all(std::array<std::size_t, D>& a, SizeOp op) {
  for (auto& v : a) v = stepped(v, op);
}

template <std::size_t D>
void resize_kernel(Conv<D>& l, SizeOp op) {
  step_all(l.kernel_size, op);
  Shape shape = l.weights.shape();
  std::vector<std::size_t> shift(shape.size(), 0);
  for (std::size_t d = 0; d < D; ++d) {
    const std::size_t old_k = shape[d];
    shape[d] = l.kernel_size[d];
    shift[d] = old_k > shape[d] ? (old_k - shape[d]) / 2 : 0;
  }
  l.weights = resize(l.weights, shape, shift);
}

template <std::size_t D>
void resize_filters(Conv<D>& l, SizeOp op) {
  l.filters = stepped(l.filters, op);
  Shape shape = l.weights.shape();
  shape.back() = l.filters;
  l.weights = resize(l.weights, shape, std::vector<std::size_t>(shape.size(), 0));
  l.bias = resize(l.bias, {l.filters}, {0});
}

LstmGate& gate_for(LSTM& l, MutatorClass c) {
  switch (c) {
    case MutatorClass::math_lstm_in_weight:
    case MutatorClass::math_lstm_in_bias: return l.input;
    case MutatorClass::math_lstm_forget_weight:
    case MutatorClass::math_lstm_forget_bias: return l.forget;
    case MutatorClass::math_lstm_cell_weight:
    case MutatorClass::math_lstm_cell_bias: return l.cell;
    default: return l.output;
  }
}

bool is_lstm_bias(MutatorClass c) {
  return c == MutatorClass::math_lstm_in_bias || c == MutatorClass::math_lstm_forget_bias ||
         c == MutatorClass::math_lstm_cell_bias || c == MutatorClass::math_lstm_out_bias;
}

// Applies an in-place, shape-preserving-or-not edit to one layer. Returns
// false if the descriptor does not fit the layer kind.
bool mutate_layer(Layer& layer, const MutantDescriptor& d) {
  const MutatorClass c = d.mutator;
  const auto neuron = d.neuron_index ? std::optional<std::size_t>(*d.neuron_index - 1) : std::nullopt;
  return std::visit(
      Overloaded{
          [&](Dense& l) {
            switch (c) {
              case MutatorClass::math_weight:
                if (!neuron || *neuron >= l.units) return false;
                mutate_column(l.weights, *neuron, std::get<MathOp>(d.operation));
                return true;
              case MutatorClass::math_bias:
                if (!neuron || *neuron >= l.units) return false;
                l.bias[*neuron] = apply_math(std::get<MathOp>(d.operation), l.bias[*neuron]);
                return true;
              case MutatorClass::act_func_rep:
                l.activation = std::get<Activation>(d.operation);
                return true;
              default: return false;
            }
          },
          [&](SimpleRNN& l) {
            switch (c) {
              case MutatorClass::math_weight:
                if (!neuron || *neuron >= l.units) return false;
                mutate_column(l.kernel, *neuron, std::get<MathOp>(d.operation));
                return true;
              case MutatorClass::math_bias:
                if (!neuron || *neuron >= l.units) return false;
                l.bias[*neuron] = apply_math(std::get<MathOp>(d.operation), l.bias[*neuron]);
                return true;
              case MutatorClass::math_act_weight:
                mutate_all(l.recurrent_kernel, std::get<MathOp>(d.operation));
                return true;
              case MutatorClass::act_func_rep:
                l.activation = std::get<Activation>(d.operation);
                return true;
              default: return false;
            }
          },
          [&](LSTM& l) {
            switch (c) {
              case MutatorClass::act_func_rep:
                l.activation = std::get<Activation>(d.operation);
                return true;
              case MutatorClass::rec_act_func_rep:
                l.recurrent_activation = std::get<Activation>(d.operation);
                return true;
              case MutatorClass::math_lstm_in_weight:
              case MutatorClass::math_lstm_forget_weight:
              case MutatorClass::math_lstm_cell_weight:
              case MutatorClass::math_lstm_out_weight: {
                LstmGate& g = gate_for(l, c);
                mutate_all(g.kernel, std::get<MathOp>(d.operation));
                mutate_all(g.recurrent_kernel, std::get<MathOp>(d.operation));
                return true;
              }
              default:
                if (!is_lstm_bias(c)) return false;
                mutate_all(gate_for(l, c).bias, std::get<MathOp>(d.operation));
                return true;
            }
          },
          [&](auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Conv1D> || std::is_same_v<T, Conv2D>) {
              switch (c) {
                case MutatorClass::math_weight_conv:
                  mutate_all(l.weights, std::get<MathOp>(d.operation));
                  return true;
                case MutatorClass::math_conv_bias:
                  mutate_all(l.bias, std::get<MathOp>(d.operation));
                  return true;
                case MutatorClass::act_func_rep:
                  l.activation = std::get<Activation>(d.operation);
                  return true;
                case MutatorClass::math_strides:
                  step_all(l.strides, std::get<SizeOp>(d.operation));
                  return true;
                case MutatorClass::math_kernel_sz:
                  resize_kernel(l, std::get<SizeOp>(d.operation));
                  return true;
                case MutatorClass::math_filters:
                  resize_filters(l, std::get<SizeOp>(d.operation));
                  return true;
                case MutatorClass::padding_rep:
                  l.padding = l.padding == Padding::valid ? Padding::same : Padding::valid;
                  return true;
                default: return false;
              }
            } else if constexpr (std::is_same_v<T, MaxPool1D> || std::is_same_v<T, MaxPool2D>) {
              switch (c) {
                case MutatorClass::math_pool_sz:
                  step_all(l.pool_size, std::get<SizeOp>(d.operation));
                  return true;
                case MutatorClass::math_strides:
                  step_all(l.strides, std::get<SizeOp>(d.operation));
                  return true;
                default: return false;
              }
            } else {
              return false;
            }
          },
      },
      layer);
}

// Unbiased draw from [0, bound) using only the engine's raw output, whose
// sequence the standard fixes; distribution objects are not portable.
std::size_t bounded(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t n = bound;
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % n);
  }
}

}  // namespace

std::string_view to_string(MutatorClass c) noexcept { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<MutatorClass> parse_mutator_class(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kClassNames.size(); ++i)
    if (kClassNames[i] == name) return static_cast<MutatorClass>(i);
  return std::nullopt;
}

std::string_view to_string(MathOp op) noexcept {
  switch (op) {
    case MathOp::add1: return "add1";
    case MathOp::sub1: return "sub1";
    case MathOp::mul2: return "mul2";
    case MathOp::div2: return "div2";
  }
  return "";
}

std::string_view to_string(SizeOp op) noexcept { return op == SizeOp::inc1 ? "inc1" : "dec1"; }

std::string to_string(const MutationOperation& op) {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string("none"); },
                        [](MathOp m) { return std::string(to_string(m)); },
                        [](SizeOp s) { return std::string(to_string(s)); },
                        [](Activation a) { return std::string(to_string(a)); },
                    },
                    op);
}

std::vector<MutantDescriptor> generate_mutants(const SequentialModel& model, Catalog catalog) {
  std::vector<MutantDescriptor> pool;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const LayerTraits traits = traits_of(model.layers[i]);
    if (catalog == Catalog::demo)
      generate_demo(pool, i + 1, model.layers[i], traits);
    else
      generate_full(pool, i + 1, traits);
  }
  return pool;
}

Materialized materialize(const SequentialModel& model, const MutantDescriptor& d) {
  try {
    if (d.layer_id == 0 || d.layer_id > model.layers.size())
      return Nonviable{"layer " + std::to_string(d.layer_id) + " does not exist"};
    SequentialModel mutant = model;
    const auto pos = mutant.layers.begin() + static_cast<std::ptrdiff_t>(d.layer_id - 1);
    if (d.mutator == MutatorClass::del_layer) {
      mutant.layers.erase(pos);
    } else if (d.mutator == MutatorClass::dup_layer) {
      Layer copy = *pos;
      mutant.layers.insert(pos + 1, std::move(copy));
    } else if (!mutate_layer(*pos, d)) {
      return Nonviable{std::string(to_string(d.mutator)) + " does not apply to a " +
                       std::string(layer_kind(*pos)) + " layer"};
    }
    validate_shapes(mutant);
    return mutant;
  } catch (const std::exception& e) {
    return Nonviable{e.what()};
  }
}

std::vector<MutantDescriptor> select_mutants(std::span<const MutantDescriptor> pool, double fraction,
                                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InvalidFraction("selection fraction must be in (0, 1], got " + std::to_string(fraction));
  if (fraction == 1.0 || pool.empty()) return {pool.begin(), pool.end()};

  std::map<std::size_t, std::vector<std::size_t>> by_layer;
  for (std::size_t i = 0; i < pool.size(); ++i) by_layer[pool[i].layer_id].push_back(i);

  // The epsilon absorbs products such as 0.7 * 10 landing just above 7.
  const auto proportional =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pool.size()) - 1e-9));
  const std::size_t target = std::min(pool.size(), std::max(proportional, by_layer.size()));

  std::mt19937_64 rng(seed);
  std::vector<bool> chosen(pool.size(), false);
  for (const auto& [layer, members] : by_layer) chosen[members[bounded(rng, members.size())]] = true;

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (!chosen[i]) rest.push_back(i);
  const std::size_t need = target - by_layer.size();
  for (std::size_t i = 0; i < need; ++i) {
    std::swap(rest[i], rest[i + bounded(rng, rest.size() - i)]);
    chosen[rest[i]] = true;
  }

  std::vector<MutantDescriptor> selected;
  selected.reserve(target);
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (chosen[i]) selected.push_back(pool[i]);
  std::sort(selected.begin(), selected.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return selected;
}

}  // namespace nnmbfl
