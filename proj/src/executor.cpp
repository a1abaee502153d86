#include "nnmbfl/executor.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace nnmbfl {

std::string_view to_string(ImpactType impact) noexcept {
  return impact == ImpactType::type2 ? "type2" : "type1";
}

ExecutionMatrix::ExecutionMatrix(std::vector<std::size_t> mutant_ids, std::size_t tests)
    : mutant_ids_(std::move(mutant_ids)),
      cols_(tests),
      cells_(mutant_ids_.size() * tests, Cell::not_impacted),
      nonviable_(mutant_ids_.size(), 0) {}

void ExecutionMatrix::mark_nonviable(std::size_t row) {
  nonviable_.at(row) = 1;
  std::fill_n(cells_.begin() + static_cast<std::ptrdiff_t>(row * cols_), cols_, Cell::nonviable);
}

std::size_t ExecutionMatrix::impacted_cells() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), Cell::impacted));
}

std::size_t ExecutionMatrix::nonviable_rows() const noexcept {
  return static_cast<std::size_t>(std::count(nonviable_.begin(), nonviable_.end(), 1));
}

bool same_behavior(const Tensor& a, const Tensor& b, const MatchPolicy& policy) {
  if (policy.task == Task::classification) return argmax(a) == argmax(b);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    if (std::isnan(x) || std::isnan(y)) {
      if (std::isnan(x) && std::isnan(y)) continue;
      return false;
    }
    if (x == y) continue;  // equal infinities
    if (!(std::fabs(x - y) <= policy.threshold)) return false;
  }
  return true;
}

bool is_impacted(const Tensor& original_out, const Tensor& mutant_out, const Expected& expected,
                 const MatchPolicy& policy, ImpactType impact) {
  if (impact == ImpactType::type1)
    return outputs_match(expected, original_out, policy) != outputs_match(expected, mutant_out, policy);
  return !same_behavior(original_out, mutant_out, policy);
}

std::vector<ExecutionMatrix> build_matrices(const SequentialModel& model,
                                            std::span<const MutantDescriptor> mutants,
                                            const Dataset& dataset, const SplitResult& split,
                                            const MatchPolicy& policy,
                                            std::span<const ImpactType> impacts,
                                            std::size_t workers) {
  std::vector<std::size_t> ids;
  ids.reserve(mutants.size());
  for (const auto& m : mutants) ids.push_back(m.id);
  std::vector<ExecutionMatrix> matrices(impacts.size(), ExecutionMatrix(ids, dataset.size()));

  detail::parallel_for(mutants.size(), workers, [&](std::size_t row) {
    auto nonviable = [&] {
      for (auto& m : matrices) m.mark_nonviable(row);
    };
    Materialized materialized = materialize(model, mutants[row]);
    const auto* mutant = std::get_if<SequentialModel>(&materialized);
    if (!mutant) {
      nonviable();
      return;
    }
    // Rows own disjoint cells, so writes from different workers never overlap.
    std::vector<std::vector<Cell>> row_cells(impacts.size(), std::vector<Cell>(dataset.size()));
    try {
      for (std::size_t col = 0; col < dataset.size(); ++col) {
        const DataPoint& point = dataset.points[col];
        const Tensor out = forward(*mutant, point.input);
        const Tensor& original = split.original_outputs[col];
        // Judged for every impact type so that an output the ground truth
        // cannot be compared with is nonviable regardless of the matrix.
        const bool passes = outputs_match(point.expected, out, policy);
        for (std::size_t k = 0; k < impacts.size(); ++k) {
          const bool hit = impacts[k] == ImpactType::type1
                               ? split.passing[col] != passes
                               : !same_behavior(original, out, policy);
          row_cells[k][col] = hit ? Cell::impacted : Cell::not_impacted;
        }
      }
    } catch (const std::exception&) {
      // A fault surfacing only at execution time condemns the whole row.
      nonviable();
      return;
    }
    for (std::size_t k = 0; k < impacts.size(); ++k)
      for (std::size_t col = 0; col < dataset.size(); ++col) matrices[k].set(row, col, row_cells[k][col]);
  });
  return matrices;
}

ExecutionMatrix build_matrix(const SequentialModel& model, std::span<const MutantDescriptor> mutants,
                             const Dataset& dataset, const SplitResult& split,
                             const MatchPolicy& policy, ImpactType impact, std::size_t workers) {
  const ImpactType impacts[] = {impact};
  return std::move(build_matrices(model, mutants, dataset, split, policy, impacts, workers).front());
}

}  // namespace nnmbfl
