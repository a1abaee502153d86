#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nnmbfl/dataset.hpp"
#include "nnmbfl/model.hpp"
#include "nnmbfl/mutation.hpp"
#include "nnmbfl/splitter.hpp"

namespace nnmbfl {

/// type1: the verdict flips (pass to fail or fail to pass).
/// type2: the output changes (predicted label, or beyond the threshold).
enum class ImpactType { type1, type2 };

std::string_view to_string(ImpactType impact) noexcept;

enum class Cell : std::uint8_t { not_impacted, impacted, nonviable };

/// k x l grid: one row per mutant (in the order given), one column per test
/// (column j is test id j + 1).
class ExecutionMatrix {
 public:
  ExecutionMatrix() = default;
  ExecutionMatrix(std::vector<std::size_t> mutant_ids, std::size_t tests);

  std::size_t rows() const noexcept { return mutant_ids_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t mutant_id(std::size_t row) const { return mutant_ids_.at(row); }
  const std::vector<std::size_t>& mutant_ids() const noexcept { return mutant_ids_; }

  Cell at(std::size_t row, std::size_t col) const { return cells_.at(row * cols_ + col); }
  void set(std::size_t row, std::size_t col, Cell cell) { cells_.at(row * cols_ + col) = cell; }

  bool row_nonviable(std::size_t row) const { return nonviable_.at(row) != 0; }
  /// Marks every cell of the row Nonviable.
  void mark_nonviable(std::size_t row);

  std::size_t impacted_cells() const noexcept;
  std::size_t nonviable_rows() const noexcept;

  bool operator==(const ExecutionMatrix&) const = default;

 private:
  std::vector<std::size_t> mutant_ids_;
  std::size_t cols_ = 0;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> nonviable_;
};

/// Predicted outputs equal under `policy`: same argmax for classification,
/// elementwise within the threshold for regression. Matching NaNs agree.
bool same_behavior(const Tensor& a, const Tensor& b, const MatchPolicy& policy);

bool is_impacted(const Tensor& original_out, const Tensor& mutant_out, const Expected& expected,
                 const MatchPolicy& policy, ImpactType impact);

/// Matrices for each requested impact type from a single pass over the
/// mutants. Rows are evaluated on up to `workers` threads (0 = hardware
/// concurrency); the result does not depend on the schedule.
std::vector<ExecutionMatrix> build_matrices(const SequentialModel& model,
                                            std::span<const MutantDescriptor> mutants,
                                            const Dataset& dataset, const SplitResult& split,
                                            const MatchPolicy& policy,
                                            std::span<const ImpactType> impacts,
                                            std::size_t workers = 0);

ExecutionMatrix build_matrix(const SequentialModel& model, std::span<const MutantDescriptor> mutants,
                             const Dataset& dataset, const SplitResult& split,
                             const MatchPolicy& policy, ImpactType impact, std::size_t workers = 0);

}  // namespace nnmbfl
