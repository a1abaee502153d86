#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nnmbfl/executor.hpp"
#include "nnmbfl/suspicion.hpp"

namespace nnmbfl {

enum class ReportFormat { text, json };

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept;

/// Text: one block per layer in rank order, first line naming the top layer,
/// each followed by its mutants (descending score) and their descriptions;
/// totals and warnings come last. `top` limits the number of layers shown.
/// JSON: every score, count and the matrix summary.
std::string render_report(const SuspiciousnessReport& report, ReportFormat format,
                          std::optional<std::size_t> top = std::nullopt);

void save_report(const SuspiciousnessReport& report, const std::filesystem::path& path,
                 ReportFormat format);

/// Machine-readable execution matrix. Cells are 'I' (impacted),
/// '.' (not impacted) and 'o' (nonviable), one string per mutant row.
std::string render_matrix(const ExecutionMatrix& matrix, ImpactType impact);

}  // namespace nnmbfl
