#include "nnmbfl/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "canonical_json.hpp"
#include "nnmbfl/errors.hpp"
#include "overloaded.hpp"

namespace nnmbfl {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;
using detail::Overloaded;

// Error context: "<source>: <json path>: <message>".
class Context {
 public:
  Context(std::string_view source, std::string path) : source_(source), path_(std::move(path)) {}

  Context operator[](std::string_view key) const { return {source_, path_ + "." + std::string(key)}; }
  Context operator[](std::size_t index) const {
    return {source_, path_ + "[" + std::to_string(index) + "]"};
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw SchemaError(std::string(source_) + ": " + path_ + ": " + message);
  }

  const Json& field(const Json& obj, std::string_view key) const {
    if (!obj.is_object()) fail("expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing field '" + std::string(key) + "'");
    return *it;
  }

  const Json* optional_field(const Json& obj, std::string_view key) const {
    if (!obj.is_object()) fail("expected an object");
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::size_t positive(const Json& v) const {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) fail("expected a positive integer");
    return v.get<std::size_t>();
  }

  double real(const Json& v) const {
    if (!v.is_number()) fail("expected a number");
    return v.get<double>();
  }

  std::string text(const Json& v) const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }

  Activation activation(const Json& v) const {
    const std::string name = text(v);
    auto kind = parse_activation(name);
    if (!kind) fail("unknown activation '" + name + "' (names are lowercase)");
    return *kind;
  }

  Padding padding(const Json& v) const {
    const std::string name = text(v);
    if (name == "valid") return Padding::valid;
    if (name == "same") return Padding::same;
    fail("unknown padding '" + name + "'");
  }

  template <std::size_t D>
  std::array<std::size_t, D> dims(const Json& v) const {
    std::array<std::size_t, D> out{};
    if (v.is_number()) {
      out.fill(positive(v));
      return out;
    }
    if (!v.is_array() || v.size() != D) fail("expected " + std::to_string(D) + " positive integers");
    for (std::size_t d = 0; d < D; ++d) out[d] = (*this)[d].positive(v[d]);
    return out;
  }

  Tensor tensor(const Json& v) const {
    Shape shape;
    for (const Json* cur = &v; cur->is_array(); cur = &(*cur)[0]) {
      shape.push_back(cur->size());
      if (cur->empty()) break;
    }
    if (shape.empty()) fail("expected a nested list of numbers");
    std::vector<double> data;
    data.reserve(element_count(shape));
    collect(v, shape, 0, data);
    return Tensor(std::move(shape), std::move(data));
  }

  Tensor tensor_field(const Json& obj, std::string_view key) const {
    return (*this)[key].tensor(field(obj, key));
  }

  const std::string& path() const noexcept { return path_; }

 private:
  void collect(const Json& v, const Shape& shape, std::size_t depth, std::vector<double>& out) const {
    if (depth == shape.size()) {
      if (!v.is_number()) fail("ragged or non-numeric array");
      out.push_back(v.get<double>());
      return;
    }
    if (!v.is_array() || v.size() != shape[depth]) fail("ragged array, expected shape " + to_string(shape));
    for (const auto& e : v) collect(e, shape, depth + 1, out);
  }

  std::string_view source_;
  std::string path_;
};

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

void check_version(const Json& root, const Context& ctx) {
  const Json& v = ctx.field(root, "format_version");
  if (!v.is_number_integer() || v.get<std::int64_t>() != kFormatVersion)
    ctx["format_version"].fail("format_version must be " + std::to_string(kFormatVersion));
}

void expect_dims(const Tensor& t, const Shape& want, const Context& ctx) {
  if (t.shape() != want)
    ctx.fail("has shape " + to_string(t.shape()) + ", declared hyperparameters require " + to_string(want));
}

Dense read_dense(const Json& j, const Context& ctx) {
  Dense l;
  l.units = ctx["units"].positive(ctx.field(j, "units"));
  if (auto* a = ctx.optional_field(j, "activation")) l.activation = ctx["activation"].activation(*a);
  l.weights = ctx.tensor_field(j, "weights");
  l.bias = ctx.tensor_field(j, "bias");
  if (l.weights.rank() != 2 || l.weights.shape()[1] != l.units)
    ctx["weights"].fail("expected a [inputs, " + std::to_string(l.units) + "] matrix, got " +
                        to_string(l.weights.shape()));
  expect_dims(l.bias, {l.units}, ctx["bias"]);
  return l;
}

template <std::size_t D>
Conv<D> read_conv(const Json& j, const Context& ctx) {
  Conv<D> l;
  l.filters = ctx["filters"].positive(ctx.field(j, "filters"));
  l.kernel_size = ctx["kernel_size"].template dims<D>(ctx.field(j, "kernel_size"));
  l.strides.fill(1);
  if (auto* s = ctx.optional_field(j, "strides")) l.strides = ctx["strides"].template dims<D>(*s);
  if (auto* p = ctx.optional_field(j, "padding")) l.padding = ctx["padding"].padding(*p);
  if (auto* a = ctx.optional_field(j, "activation")) l.activation = ctx["activation"].activation(*a);
  l.weights = ctx.tensor_field(j, "weights");
  l.bias = ctx.tensor_field(j, "bias");
  if (l.weights.rank() != D + 2) ctx["weights"].fail("expected rank " + std::to_string(D + 2));
  Shape want(l.kernel_size.begin(), l.kernel_size.end());
  want.push_back(l.weights.shape()[D]);
  want.push_back(l.filters);
  expect_dims(l.weights, want, ctx["weights"]);
  expect_dims(l.bias, {l.filters}, ctx["bias"]);
  return l;
}

template <std::size_t D>
MaxPool<D> read_pool(const Json& j, const Context& ctx) {
  MaxPool<D> l;
  l.pool_size = ctx["pool_size"].template dims<D>(ctx.field(j, "pool_size"));
  l.strides = l.pool_size;
  if (auto* s = ctx.optional_field(j, "strides")) l.strides = ctx["strides"].template dims<D>(*s);
  return l;
}

BatchNorm read_batchnorm(const Json& j, const Context& ctx) {
  BatchNorm l;
  if (auto* e = ctx.optional_field(j, "epsilon")) l.epsilon = ctx["epsilon"].real(*e);
  l.gamma = ctx.tensor_field(j, "gamma");
  l.beta = ctx.tensor_field(j, "beta");
  l.moving_mean = ctx.tensor_field(j, "moving_mean");
  l.moving_variance = ctx.tensor_field(j, "moving_variance");
  if (l.gamma.rank() != 1) ctx["gamma"].fail("expected a vector");
  const Shape channels = l.gamma.shape();
  expect_dims(l.beta, channels, ctx["beta"]);
  expect_dims(l.moving_mean, channels, ctx["moving_mean"]);
  expect_dims(l.moving_variance, channels, ctx["moving_variance"]);
  return l;
}

void check_gate(const Tensor& kernel, const Tensor& recurrent, const Tensor& bias, std::size_t units,
                const Context& ctx) {
  if (kernel.rank() != 2 || kernel.shape()[1] != units)
    ctx["kernel"].fail("expected a [features, " + std::to_string(units) + "] matrix");
  expect_dims(recurrent, {units, units}, ctx["recurrent_kernel"]);
  expect_dims(bias, {units}, ctx["bias"]);
}

SimpleRNN read_rnn(const Json& j, const Context& ctx) {
  SimpleRNN l;
  l.units = ctx["units"].positive(ctx.field(j, "units"));
  if (auto* a = ctx.optional_field(j, "activation")) l.activation = ctx["activation"].activation(*a);
  l.kernel = ctx.tensor_field(j, "kernel");
  l.recurrent_kernel = ctx.tensor_field(j, "recurrent_kernel");
  l.bias = ctx.tensor_field(j, "bias");
  check_gate(l.kernel, l.recurrent_kernel, l.bias, l.units, ctx);
  return l;
}

LSTM read_lstm(const Json& j, const Context& ctx) {
  LSTM l;
  l.units = ctx["units"].positive(ctx.field(j, "units"));
  if (auto* a = ctx.optional_field(j, "activation")) l.activation = ctx["activation"].activation(*a);
  if (auto* a = ctx.optional_field(j, "recurrent_activation"))
    l.recurrent_activation = ctx["recurrent_activation"].activation(*a);
  const Json& gates = ctx.field(j, "gates");
  const Context gctx = ctx["gates"];
  auto gate = [&](std::string_view name, LstmGate& g) {
    const Context c = gctx[name];
    const Json& obj = gctx.field(gates, name);
    g.kernel = c.tensor_field(obj, "kernel");
    g.recurrent_kernel = c.tensor_field(obj, "recurrent_kernel");
    g.bias = c.tensor_field(obj, "bias");
    check_gate(g.kernel, g.recurrent_kernel, g.bias, l.units, c);
  };
  gate("input", l.input);
  gate("forget", l.forget);
  gate("cell", l.cell);
  gate("output", l.output);
  return l;
}

Layer read_layer(const Json& j, const Context& ctx) {
  const std::string kind = ctx["kind"].text(ctx.field(j, "kind"));
  if (kind == "dense") return read_dense(j, ctx);
  if (kind == "conv1d") return read_conv<1>(j, ctx);
  if (kind == "conv2d") return read_conv<2>(j, ctx);
  if (kind == "maxpool1d") return read_pool<1>(j, ctx);
  if (kind == "maxpool2d") return read_pool<2>(j, ctx);
  if (kind == "flatten") return Flatten{};
  if (kind == "dropout") {
    Dropout l;
    if (auto* r = ctx.optional_field(j, "rate")) l.rate = ctx["rate"].real(*r);
    return l;
  }
  if (kind == "batchnorm") return read_batchnorm(j, ctx);
  if (kind == "simplernn") return read_rnn(j, ctx);
  if (kind == "lstm") return read_lstm(j, ctx);
  ctx["kind"].fail("unknown layer kind '" + kind + "'");
}

// Nested row-major lists mirroring the tensor shape.
OrderedJson nested(const Tensor& t) {
  if (t.rank() == 0) return OrderedJson::array();
  const Shape& shape = t.shape();
  auto build = [&](auto&& self, std::size_t depth, std::size_t offset, std::size_t stride) -> OrderedJson {
    OrderedJson arr = OrderedJson::array();
    const std::size_t inner = stride / shape[depth];
    for (std::size_t i = 0; i < shape[depth]; ++i) {
      if (depth + 1 == shape.size())
        arr.push_back(t[offset + i]);
      else
        arr.push_back(self(self, depth + 1, offset + i * inner, inner));
    }
    return arr;
  };
  return build(build, 0, 0, t.size());
}

template <std::size_t D>
OrderedJson dims_json(const std::array<std::size_t, D>& a) {
  OrderedJson arr = OrderedJson::array();
  for (std::size_t v : a) arr.push_back(v);
  return arr;
}

OrderedJson gate_json(const LstmGate& g) {
  OrderedJson j;
  j["kernel"] = nested(g.kernel);
  j["recurrent_kernel"] = nested(g.recurrent_kernel);
  j["bias"] = nested(g.bias);
  return j;
}

OrderedJson layer_json(const Layer& layer) {
  OrderedJson j;
  j["kind"] = std::string(layer_kind(layer));
  std::visit(Overloaded{
                 [&](const Dense& l) {
                   j["units"] = l.units;
                   j["activation"] = std::string(to_string(l.activation));
                   j["weights"] = nested(l.weights);
                   j["bias"] = nested(l.bias);
                 },
                 [&](const Flatten&) {},
                 [&](const Dropout& l) { j["rate"] = l.rate; },
                 [&](const BatchNorm& l) {
                   j["epsilon"] = l.epsilon;
                   j["gamma"] = nested(l.gamma);
                   j["beta"] = nested(l.beta);
                   j["moving_mean"] = nested(l.moving_mean);
                   j["moving_variance"] = nested(l.moving_variance);
                 },
                 [&](const SimpleRNN& l) {
                   j["units"] = l.units;
                   j["activation"] = std::string(to_string(l.activation));
                   j["kernel"] = nested(l.kernel);
                   j["recurrent_kernel"] = nested(l.recurrent_kernel);
                   j["bias"] = nested(l.bias);
                 },
                 [&](const LSTM& l) {
                   j["units"] = l.units;
                   j["activation"] = std::string(to_string(l.activation));
                   j["recurrent_activation"] = std::string(to_string(l.recurrent_activation));
                   OrderedJson gates;
                   gates["input"] = gate_json(l.input);
                   gates["forget"] = gate_json(l.forget);
                   gates["cell"] = gate_json(l.cell);
                   gates["output"] = gate_json(l.output);
                   j["gates"] = std::move(gates);
                 },
                 [&](const auto& l) {
                   using T = std::decay_t<decltype(l)>;
                   if constexpr (std::is_same_v<T, Conv1D> || std::is_same_v<T, Conv2D>) {
                     j["filters"] = l.filters;
                     j["kernel_size"] = dims_json(l.kernel_size);
                     j["strides"] = dims_json(l.strides);
                     j["padding"] = std::string(to_string(l.padding));
                     j["activation"] = std::string(to_string(l.activation));
                     j["weights"] = nested(l.weights);
                     j["bias"] = nested(l.bias);
                   } else {
                     j["pool_size"] = dims_json(l.pool_size);
                     j["strides"] = dims_json(l.strides);
                   }
                 },
             },
             layer);
  return j;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

SequentialModel parse_model(std::string_view text, std::string_view source) {
  const Json root = parse_json(text, source);
  const Context ctx(source, "$");
  check_version(root, ctx);
  SequentialModel model;
  const Json& shape = ctx.field(root, "input_shape");
  if (!shape.is_array() || shape.empty()) ctx["input_shape"].fail("expected a non-empty list");
  for (std::size_t i = 0; i < shape.size(); ++i)
    model.input_shape.push_back(ctx["input_shape"][i].positive(shape[i]));
  const Json& layers = ctx.field(root, "layers");
  if (!layers.is_array() || layers.empty()) ctx["layers"].fail("expected a non-empty list of layers");
  for (std::size_t i = 0; i < layers.size(); ++i) model.layers.push_back(read_layer(layers[i], ctx["layers"][i]));
  try {
    validate_shapes(model);
  } catch (const ShapeError& e) {
    throw ShapeError(e.layer_id(), std::string(source) + ": " + e.reason());
  }
  return model;
}

SequentialModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path), path.string());
}

std::string serialize_model(const SequentialModel& model) {
  OrderedJson root;
  root["format_version"] = kFormatVersion;
  root["input_shape"] = model.input_shape;
  OrderedJson layers = OrderedJson::array();
  for (const Layer& l : model.layers) layers.push_back(layer_json(l));
  root["layers"] = std::move(layers);
  return detail::canonical_json(root);
}

void save_model(const SequentialModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

Dataset parse_dataset(std::string_view text, std::string_view source) {
  const Json root = parse_json(text, source);
  const Context ctx(source, "$");
  check_version(root, ctx);
  Dataset ds;
  const std::string task = ctx["task"].text(ctx.field(root, "task"));
  if (task == "classification")
    ds.task = Task::classification;
  else if (task == "regression")
    ds.task = Task::regression;
  else
    ctx["task"].fail("task must be 'classification' or 'regression'");
  if (auto* n = ctx.optional_field(root, "num_classes")) {
    if (ds.task != Task::classification) ctx["num_classes"].fail("only valid for classification");
    ds.num_classes = ctx["num_classes"].positive(*n);
  }

  const Json& points = ctx.field(root, "points");
  const Context pctx = ctx["points"];
  if (!points.is_array() || points.empty()) pctx.fail("at least one data point is required");

  std::optional<Shape> input_shape;
  std::optional<Shape> expected_shape;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Context c = pctx[i];
    const Json& p = points[i];
    DataPoint point;
    point.id = i + 1;
    point.input = c.tensor_field(p, "input");
    if (input_shape && point.input.shape() != *input_shape)
      c["input"].fail("shape " + to_string(point.input.shape()) + " differs from the first point's " +
                      to_string(*input_shape));
    input_shape = point.input.shape();

    const Json& expected = c.field(p, "expected");
    const Context ec = c["expected"];
    if (ds.task == Task::classification) {
      std::size_t label = 0;
      if (expected.is_number_integer()) {
        if (expected.get<std::int64_t>() < 0) ec.fail("class labels must be non-negative");
        label = expected.get<std::size_t>();
      } else if (expected.is_array()) {
        const Tensor onehot = ec.tensor(expected);
        if (onehot.rank() != 1) ec.fail("one-hot label must be a flat list");
        std::size_t ones = 0;
        for (std::size_t k = 0; k < onehot.size(); ++k) {
          if (onehot[k] == 1.0) {
            label = k;
            ++ones;
          } else if (onehot[k] != 0.0) {
            ec.fail("one-hot label may only contain 0 and 1");
          }
        }
        if (ones != 1) ec.fail("one-hot label must contain exactly one 1");
        if (!ds.num_classes) ds.num_classes = onehot.size();
        if (*ds.num_classes != onehot.size())
          ec.fail("one-hot width " + std::to_string(onehot.size()) + " differs from " +
                  std::to_string(*ds.num_classes) + " classes");
      } else {
        ec.fail("expected an integer class label or a one-hot list");
      }
      point.expected = ClassLabel{label};
    } else {
      Tensor target = expected.is_number() ? Tensor::vector({ec.real(expected)}) : ec.tensor(expected);
      if (expected_shape && target.shape() != *expected_shape)
        ec.fail("shape " + to_string(target.shape()) + " differs from the first point's " +
                to_string(*expected_shape));
      expected_shape = target.shape();
      point.expected = std::move(target);
    }
    ds.points.push_back(std::move(point));
  }
  if (ds.num_classes) {
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
      const auto label = std::get<ClassLabel>(ds.points[i].expected).value;
      if (label >= *ds.num_classes)
        pctx[i]["expected"].fail("label " + std::to_string(label) + " out of range for " +
                                 std::to_string(*ds.num_classes) + " classes");
    }
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_text_file(path), path.string());
}

std::string serialize_dataset(const Dataset& dataset) {
  OrderedJson root;
  root["format_version"] = kFormatVersion;
  root["task"] = std::string(to_string(dataset.task));
  if (dataset.num_classes) root["num_classes"] = *dataset.num_classes;
  OrderedJson points = OrderedJson::array();
  for (const DataPoint& p : dataset.points) {
    OrderedJson j;
    j["input"] = nested(p.input);
    std::visit(Overloaded{
                   [&](const ClassLabel& l) { j["expected"] = l.value; },
                   [&](const Tensor& t) { j["expected"] = nested(t); },
               },
               p.expected);
    points.push_back(std::move(j));
  }
  root["points"] = std::move(points);
  return detail::canonical_json(root);
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_text_file(path, serialize_dataset(dataset));
}

}  // namespace nnmbfl
