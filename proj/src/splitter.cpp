#include "nnmbfl/splitter.hpp"

#include <cmath>
#include <string>

#include "nnmbfl/errors.hpp"
#include "overloaded.hpp"
#include "parallel.hpp"

namespace nnmbfl {

std::string_view to_string(Task task) noexcept {
  return task == Task::regression ? "regression" : "classification";
}

std::optional<std::size_t> argmax(const Tensor& t) noexcept {
  if (t.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::isnan(t[i])) return std::nullopt;
    if (t[i] > t[best]) best = i;
  }
  return best;
}

bool outputs_match(const Expected& expected, const Tensor& actual, const MatchPolicy& policy) {
  if (policy.task == Task::classification) {
    const auto* label = std::get_if<ClassLabel>(&expected);
    if (!label) throw ShapeError(0, "classification requires a class label as expected output");
    if (label->value >= actual.size()) {
      throw ShapeError(0, "class label " + std::to_string(label->value) +
                              " out of range for output width " + std::to_string(actual.size()));
    }
    const auto predicted = argmax(actual);
    return predicted && *predicted == label->value;
  }
  const auto* target = std::get_if<Tensor>(&expected);
  if (!target) throw ShapeError(0, "regression requires a tensor as expected output");
  if (target->size() != actual.size()) {
    throw ShapeError(0, "expected output has " + std::to_string(target->size()) +
                            " values, model produced " + std::to_string(actual.size()));
  }
  for (std::size_t i = 0; i < actual.size(); ++i) {
    // Written so that NaN fails the comparison.
    if (!(std::fabs((*target)[i] - actual[i]) <= policy.threshold)) return false;
  }
  return true;
}

SplitResult split(const SequentialModel& model, const Dataset& dataset, const MatchPolicy& policy,
                  std::size_t workers) {
  SplitResult result;
  const std::size_t n = dataset.points.size();
  result.original_outputs.resize(n);
  std::vector<char> verdicts(n, 0);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    const DataPoint& point = dataset.points[i];
    result.original_outputs[i] = forward(model, point.input);
    verdicts[i] = outputs_match(point.expected, result.original_outputs[i], policy) ? 1 : 0;
  });
  result.passing.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t id = dataset.points[i].id;
    result.passing[i] = verdicts[i] != 0;
    (verdicts[i] ? result.passing_ids : result.failing_ids).push_back(id);
  }
  result.no_failing_tests = result.failing_ids.empty();
  return result;
}

}  // namespace nnmbfl
