#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nnmbfl/dataset.hpp"
#include "nnmbfl/model.hpp"

namespace nnmbfl {

/// How an output is compared with ground truth. `threshold` only matters for
/// regression.
struct MatchPolicy {
  Task task = Task::classification;
  double threshold = 0.001;
};

/// Index of the largest element, lowest index on ties. Empty when the tensor
/// holds a NaN or is empty.
std::optional<std::size_t> argmax(const Tensor& t) noexcept;

/// Classification: argmax(actual) equals the label. Regression: every
/// component within `threshold` of the expected value. Any NaN in `actual`
/// never matches. Throws ShapeError on incompatible widths.
bool outputs_match(const Expected& expected, const Tensor& actual, const MatchPolicy& policy);

struct SplitResult {
  std::vector<std::size_t> passing_ids;  // ascending
  std::vector<std::size_t> failing_ids;  // ascending
  /// Indexed by test id - 1.
  std::vector<Tensor> original_outputs;
  /// Indexed by test id - 1.
  std::vector<bool> passing;
  /// Set when nothing fails; localization is then vacuous.
  bool no_failing_tests = false;

  const Tensor& original_output(std::size_t test_id) const { return original_outputs.at(test_id - 1); }
  bool is_passing(std::size_t test_id) const { return passing.at(test_id - 1); }
};

/// Runs the original model once per data point and partitions the ids into
/// passing and failing tests.
SplitResult split(const SequentialModel& model, const Dataset& dataset, const MatchPolicy& policy,
                  std::size_t workers = 1);

}  // namespace nnmbfl
