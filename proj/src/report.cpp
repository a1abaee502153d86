#include "nnmbfl/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "canonical_json.hpp"
#include "nnmbfl/model_io.hpp"

namespace nnmbfl {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string render_text(const SuspiciousnessReport& r, std::optional<std::size_t> top) {
  std::string out;
  const std::size_t shown = top ? std::min(*top, r.layers.size()) : r.layers.size();
  for (std::size_t rank = 0; rank < shown; ++rank) {
    const LayerScore& layer = r.layers[rank];
    out += "layer " + std::to_string(layer.layer_id) + "  score " + fixed(layer.score) + "  rank " +
           std::to_string(rank + 1) + "  (" + std::to_string(layer.mutant_scores.size()) +
           " mutants)\n";
    for (const MutantScore& ms : layer.mutant_scores) {
      const MutantRecord* rec = r.find_mutant(ms.id);
      char head[64];
      std::snprintf(head, sizeof head, "  M%-5zu %s  ", ms.id, fixed(ms.score).c_str());
      out += head;
      if (rec) {
        out += rec->description;
        if (rec->stats.nonviable) out += "  [nonviable]";
      }
      out += "\n";
    }
  }
  out += "formula " + std::string(to_string(r.formula)) + ", impact " + std::string(to_string(r.impact)) +
         ", threshold " + general(r.threshold) + "\n";
  out += "failing tests " + std::to_string(r.totals.failing) + ", passing tests " +
         std::to_string(r.totals.passing) + ", mutants " + std::to_string(r.totals.mutants) +
         ", nonviable " + std::to_string(r.totals.nonviable) + "\n";
  if (r.formula == Formula::muse) out += "alpha " + fixed(r.alpha) + "\n";
  for (const std::string& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

OrderedJson report_json(const SuspiciousnessReport& r) {
  OrderedJson root;
  root["formula"] = std::string(to_string(r.formula));
  root["impact_type"] = std::string(to_string(r.impact));
  root["threshold"] = r.threshold;
  OrderedJson layers = OrderedJson::array();
  for (const LayerScore& layer : r.layers) {
    OrderedJson lj;
    lj["id"] = layer.layer_id;
    lj["score"] = layer.score;
    OrderedJson mutants = OrderedJson::array();
    for (const MutantScore& ms : layer.mutant_scores) {
      const MutantRecord* rec = r.find_mutant(ms.id);
      OrderedJson mj;
      mj["id"] = ms.id;
      mj["description"] = rec ? rec->description : std::string();
      mj["score"] = ms.score;
      mj["n_fail_impacted"] = rec ? rec->stats.n_fail_impacted : 0;
      mj["n_pass_impacted"] = rec ? rec->stats.n_pass_impacted : 0;
      mj["nonviable"] = rec && rec->stats.nonviable;
      mutants.push_back(std::move(mj));
    }
    lj["mutants"] = std::move(mutants);
    layers.push_back(std::move(lj));
  }
  root["layers"] = std::move(layers);
  OrderedJson totals;
  totals["T_f"] = r.totals.failing;
  totals["T_p"] = r.totals.passing;
  totals["mutants"] = r.totals.mutants;
  totals["nonviable"] = r.totals.nonviable;
  root["totals"] = std::move(totals);
  OrderedJson matrix;
  matrix["rows"] = r.matrix.rows;
  matrix["cols"] = r.matrix.cols;
  matrix["impacted_cells"] = r.matrix.impacted_cells;
  matrix["nonviable_rows"] = r.matrix.nonviable_rows;
  root["matrix"] = std::move(matrix);
  if (r.formula == Formula::muse) {
    OrderedJson muse;
    muse["alpha"] = r.alpha;
    muse["fail_to_pass"] = r.flips.fail_to_pass;
    muse["pass_to_fail"] = r.flips.pass_to_fail;
    root["muse"] = std::move(muse);
  }
  root["warnings"] = r.warnings;
  return root;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept {
  if (name == "text") return ReportFormat::text;
  if (name == "json") return ReportFormat::json;
  return std::nullopt;
}

std::string render_report(const SuspiciousnessReport& report, ReportFormat format,
                          std::optional<std::size_t> top) {
  if (format == ReportFormat::json) return detail::canonical_json(report_json(report));
  return render_text(report, top);
}

void save_report(const SuspiciousnessReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  write_text_file(path, render_report(report, format));
}

std::string render_matrix(const ExecutionMatrix& matrix, ImpactType impact) {
  OrderedJson root;
  root["impact_type"] = std::string(to_string(impact));
  root["rows"] = matrix.rows();
  root["cols"] = matrix.cols();
  OrderedJson rows = OrderedJson::array();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    std::string cells(matrix.cols(), '.');
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      switch (matrix.at(r, c)) {
        case Cell::impacted: cells[c] = 'I'; break;
        case Cell::nonviable: cells[c] = 'o'; break;
        case Cell::not_impacted: break;
      }
    }
    OrderedJson row;
    row["mutant"] = matrix.mutant_id(r);
    row["nonviable"] = matrix.row_nonviable(r);
    row["cells"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  root["matrix"] = std::move(rows);
  return detail::canonical_json(root);
}

}  // namespace nnmbfl
