#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "nnmbfl/tensor.hpp"

namespace nnmbfl {

enum class Task { classification, regression };

std::string_view to_string(Task task) noexcept;

struct ClassLabel {
  std::size_t value = 0;

  bool operator==(const ClassLabel&) const = default;
};

/// Ground truth: a class label for classifiers, a tensor for regressors.
using Expected = std::variant<ClassLabel, Tensor>;

/// One (input, expected output) pair. `id` is the 1-based position in the
/// dataset and is the test id used everywhere downstream.
struct DataPoint {
  std::size_t id = 0;
  Tensor input;
  Expected expected;

  bool operator==(const DataPoint&) const = default;
};

struct Dataset {
  Task task = Task::classification;
  /// Output width for classification, when the file states it.
  std::optional<std::size_t> num_classes;
  std::vector<DataPoint> points;

  std::size_t size() const noexcept { return points.size(); }

  bool operator==(const Dataset&) const = default;
};

}  // namespace nnmbfl
