#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nnmbfl/model.hpp"

namespace nnmbfl {

/// Mutator classes, in catalog order. Generation order follows this order.
enum class MutatorClass {
  math_weight,
  math_weight_conv,
  math_act_weight,
  math_lstm_in_weight,
  math_lstm_forget_weight,
  math_lstm_cell_weight,
  math_lstm_out_weight,
  math_bias,
  del_layer,
  dup_layer,
  math_conv_bias,
  math_lstm_in_bias,
  math_lstm_forget_bias,
  math_lstm_cell_bias,
  math_lstm_out_bias,
  act_func_rep,
  math_pool_sz,
  math_strides,
  math_kernel_sz,
  math_filters,
  padding_rep,
  rec_act_func_rep,
};

inline constexpr std::size_t kMutatorClassCount = 22;

/// Upper-case catalog identifier, e.g. "MATH_WEIGHT".
std::string_view to_string(MutatorClass c) noexcept;
std::optional<MutatorClass> parse_mutator_class(std::string_view name) noexcept;

/// Arithmetic applied to every targeted scalar w.
enum class MathOp { add1, sub1, mul2, div2 };  // w+1, w-1, 2w, w/2
inline constexpr std::array<MathOp, 4> kMathOps = {MathOp::add1, MathOp::sub1, MathOp::mul2,
                                                   MathOp::div2};

/// Hyperparameter step for size classes.
enum class SizeOp { inc1, dec1 };

std::string_view to_string(MathOp op) noexcept;
std::string_view to_string(SizeOp op) noexcept;

/// monostate for DEL_LAYER, DUP_LAYER and PADDING_REP; the replacement
/// activation for *_ACT_FUNC_REP.
using MutationOperation = std::variant<std::monostate, MathOp, SizeOp, Activation>;

std::string to_string(const MutationOperation& op);

/// Deterministic recipe for one perturbation. Contains no random values.
struct MutantDescriptor {
  std::size_t id = 0;        // 1-based, generation order
  std::size_t layer_id = 0;  // 1-based
  std::optional<std::size_t> neuron_index;  // 1-based within the layer
  MutatorClass mutator = MutatorClass::math_weight;
  MutationOperation operation;
  std::string description;

  bool operator==(const MutantDescriptor&) const = default;
};

enum class Catalog {
  /// Every applicable class and operation.
  full,
  /// Per Dense neuron: halve its weights, halve its bias, swap relu and
  /// softmax on the layer. Neuron-major order.
  demo,
};

std::vector<MutantDescriptor> generate_mutants(const SequentialModel& model,
                                               Catalog catalog = Catalog::full);

struct Nonviable {
  std::string reason;
};

using Materialized = std::variant<SequentialModel, Nonviable>;

/// Deep copy of `model` with `descriptor` applied. Returns Nonviable when the
/// mutated structure fails validate_shapes; never throws for descriptors
/// generated from `model`.
Materialized materialize(const SequentialModel& model, const MutantDescriptor& descriptor);

/// Seeded subset of max(ceil(fraction * |pool|), mutated layers) descriptors
/// containing at least one mutant of every layer present in `pool`. Output is
/// in ascending id order. Throws InvalidFraction unless 0 < fraction <= 1.
std::vector<MutantDescriptor> select_mutants(std::span<const MutantDescriptor> pool,
                                             double fraction, std::uint64_t seed);

}  // namespace nnmbfl
