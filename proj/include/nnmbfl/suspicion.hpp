#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnmbfl/executor.hpp"
#include "nnmbfl/mutation.hpp"
#include "nnmbfl/splitter.hpp"

namespace nnmbfl {

enum class Formula { metallaxis_sbi, metallaxis_ochiai, muse };

/// CLI spelling: "metallaxis-sbi", "metallaxis-ochiai", "muse".
std::string_view to_string(Formula formula) noexcept;
std::optional<Formula> parse_formula(std::string_view name) noexcept;

/// Per-mutant kernel used inside Metallaxis.
enum class Kernel { sbi, ochiai };

/// Impact counts for one mutant. Nonviable mutants carry zero counts.
struct MutantStats {
  std::size_t id = 0;
  std::size_t layer_id = 0;
  std::size_t n_fail_impacted = 0;
  std::size_t n_pass_impacted = 0;
  bool nonviable = false;

  bool operator==(const MutantStats&) const = default;
};

struct MutantScore {
  std::size_t id = 0;
  double score = 0.0;

  bool operator==(const MutantScore&) const = default;
};

struct LayerScore {
  std::size_t layer_id = 0;
  double score = 0.0;
  /// Descending by score, ascending id on ties.
  std::vector<MutantScore> mutant_scores;

  bool operator==(const LayerScore&) const = default;
};

/// |F~>P| and |P~>F| over the whole type-1 matrix: failing (passing) tests
/// flipped by at least one mutant.
struct FlipCounts {
  std::size_t fail_to_pass = 0;
  std::size_t pass_to_fail = 0;
};

std::vector<MutantStats> collect_stats(const ExecutionMatrix& matrix,
                                       std::span<const MutantDescriptor> mutants,
                                       const SplitResult& split);

FlipCounts count_flips(const ExecutionMatrix& matrix, const SplitResult& split);

/// n_f / (n_f + n_p); 0 when both are 0.
double sbi_mutant(std::size_t n_fail_impacted, std::size_t n_pass_impacted) noexcept;

/// n_f / sqrt((n_f + n_p) * |T_f|); 0 when the denominator is 0.
double ochiai_mutant(std::size_t n_fail_impacted, std::size_t n_pass_impacted,
                     std::size_t total_failing) noexcept;

/// Max kernel value over the viable mutants; 0 for an empty or all-nonviable
/// layer. `stats` must all target `layer_id`.
LayerScore metallaxis_layer(std::size_t layer_id, std::span<const MutantStats> stats, Kernel kernel,
                            std::size_t total_failing);

/// (|F~>P| / |T_f|) * (|T_p| / |P~>F|); 0 when |P~>F| or |T_f| is 0.
double muse_alpha(std::size_t fail_to_pass, std::size_t pass_to_fail, std::size_t total_failing,
                  std::size_t total_passing) noexcept;

/// One mutant's MUSE term n_f/|T_f| - alpha * n_p/|T_p|, with zero-size
/// denominators contributing 0.
double muse_term(const MutantStats& s, double alpha, std::size_t total_failing,
                 std::size_t total_passing) noexcept;

/// Mean of muse_term over every mutant of the layer, nonviable ones
/// included as zero terms; 0 for an empty or all-nonviable layer.
LayerScore muse_layer(std::size_t layer_id, std::span<const MutantStats> stats, double alpha,
                      std::size_t total_failing, std::size_t total_passing);

/// Descending by score, ascending layer id on ties.
std::vector<LayerScore> rank(std::vector<LayerScore> layer_scores);

struct ReportTotals {
  std::size_t failing = 0;  // |T_f|
  std::size_t passing = 0;  // |T_p|
  std::size_t mutants = 0;
  std::size_t nonviable = 0;

  bool operator==(const ReportTotals&) const = default;
};

/// Everything the report writers need about one mutant.
struct MutantRecord {
  MutantStats stats;
  std::string description;
  double score = 0.0;

  bool operator==(const MutantRecord&) const = default;
};

struct MatrixSummary {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t impacted_cells = 0;
  std::size_t nonviable_rows = 0;

  bool operator==(const MatrixSummary&) const = default;
};

struct SuspiciousnessReport {
  Formula formula = Formula::metallaxis_sbi;
  ImpactType impact = ImpactType::type1;
  double threshold = 0.001;
  /// Only meaningful for MUSE.
  double alpha = 0.0;
  FlipCounts flips;
  std::vector<LayerScore> layers;     // ranked
  std::vector<MutantRecord> mutants;  // ascending id
  ReportTotals totals;
  MatrixSummary matrix;
  std::vector<std::string> warnings;

  const MutantRecord* find_mutant(std::size_t id) const noexcept;
  bool operator==(const SuspiciousnessReport&) const = default;
};

/// Scores every layer of a model with `layer_count` layers from a matrix
/// built over `mutants`, and ranks them. MUSE requires a type-1 matrix
/// (std::invalid_argument otherwise).
SuspiciousnessReport score_layers(Formula formula, ImpactType impact, double threshold,
                                  std::size_t layer_count, const ExecutionMatrix& matrix,
                                  std::span<const MutantDescriptor> mutants,
                                  const SplitResult& split);

}  // namespace nnmbfl
