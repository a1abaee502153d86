#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "nnmbfl/executor.hpp"
#include "nnmbfl/mutation.hpp"
#include "nnmbfl/report.hpp"
#include "nnmbfl/suspicion.hpp"

namespace nnmbfl {

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitVacuous = 3 };

struct RunConfig {
  std::filesystem::path model_path;
  std::filesystem::path data_path;
  Formula formula = Formula::metallaxis_sbi;
  /// Unset: type1 for MUSE, type2 for Metallaxis. MUSE with type2 is rejected.
  std::optional<ImpactType> impact;
  double threshold = 0.001;
  double select_fraction = 1.0;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::optional<std::filesystem::path> out;
  ReportFormat out_format = ReportFormat::text;
  std::optional<std::filesystem::path> dump_matrix;
  std::optional<std::size_t> top;
  Catalog catalog = Catalog::full;
};

struct RunResult {
  int exit_code = kExitOk;
  std::optional<SuspiciousnessReport> report;
  /// What the CLI prints on standard output.
  std::string console;
  /// Diagnostics for standard error (errors and warnings).
  std::string diagnostics;
};

/// The whole pipeline: load, generate (and select) mutants, split tests,
/// build the execution matrix, score, rank and write the report. Never
/// throws for bad inputs; they become exit code 2 with a diagnostic.
RunResult run(const RunConfig& config);

/// Lists the mutant pool of the configured model without executing it.
RunResult describe_mutants(const RunConfig& config);

/// One line per descriptor: "M<id>  layer <n>  <CLASS> <op>  <description>".
std::string format_mutant_listing(const std::vector<MutantDescriptor>& pool);

}  // namespace nnmbfl
