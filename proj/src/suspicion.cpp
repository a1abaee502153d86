#include "nnmbfl/suspicion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nnmbfl {

std::string_view to_string(Formula formula) noexcept {
  switch (formula) {
    case Formula::metallaxis_sbi: return "metallaxis-sbi";
    case Formula::metallaxis_ochiai: return "metallaxis-ochiai";
    case Formula::muse: return "muse";
  }
  return "";
}

std::optional<Formula> parse_formula(std::string_view name) noexcept {
  for (Formula f : {Formula::metallaxis_sbi, Formula::metallaxis_ochiai, Formula::muse})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

std::vector<MutantStats> collect_stats(const ExecutionMatrix& matrix,
                                       std::span<const MutantDescriptor> mutants,
                                       const SplitResult& split) {
  if (matrix.rows() != mutants.size())
    throw std::invalid_argument("execution matrix rows do not match the mutant list");
  std::vector<MutantStats> stats(mutants.size());
  for (std::size_t row = 0; row < matrix.rows(); ++row) {
    MutantStats& s = stats[row];
    s.id = mutants[row].id;
    s.layer_id = mutants[row].layer_id;
    s.nonviable = matrix.row_nonviable(row);
    if (s.nonviable) continue;
    for (std::size_t col = 0; col < matrix.cols(); ++col) {
      if (matrix.at(row, col) != Cell::impacted) continue;
      if (split.passing[col])
        ++s.n_pass_impacted;
      else
        ++s.n_fail_impacted;
    }
  }
  return stats;
}

FlipCounts count_flips(const ExecutionMatrix& matrix, const SplitResult& split) {
  FlipCounts flips;
  for (std::size_t col = 0; col < matrix.cols(); ++col) {
    bool hit = false;
    for (std::size_t row = 0; row < matrix.rows() && !hit; ++row)
      hit = matrix.at(row, col) == Cell::impacted;
    if (!hit) continue;
    if (split.passing[col])
      ++flips.pass_to_fail;
    else
      ++flips.fail_to_pass;
  }
  return flips;
}

double sbi_mutant(std::size_t n_fail_impacted, std::size_t n_pass_impacted) noexcept {
  const std::size_t denom = n_fail_impacted + n_pass_impacted;
  if (denom == 0) return 0.0;
  return static_cast<double>(n_fail_impacted) / static_cast<double>(denom);
}

double ochiai_mutant(std::size_t n_fail_impacted, std::size_t n_pass_impacted,
                     std::size_t total_failing) noexcept {
  const double denom = std::sqrt(static_cast<double>(n_fail_impacted + n_pass_impacted) *
                                 static_cast<double>(total_failing));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(n_fail_impacted) / denom;
}

namespace {

void sort_mutants(std::vector<MutantScore>& scores) {
  std::sort(scores.begin(), scores.end(), [](const MutantScore& a, const MutantScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

}  // namespace

LayerScore metallaxis_layer(std::size_t layer_id, std::span<const MutantStats> stats, Kernel kernel,
                            std::size_t total_failing) {
  LayerScore result{layer_id, 0.0, {}};
  for (const MutantStats& s : stats) {
    double value = 0.0;
    if (!s.nonviable) {
      value = kernel == Kernel::sbi ? sbi_mutant(s.n_fail_impacted, s.n_pass_impacted)
                                    : ochiai_mutant(s.n_fail_impacted, s.n_pass_impacted, total_failing);
      result.score = std::max(result.score, value);
    }
    result.mutant_scores.push_back({s.id, value});
  }
  sort_mutants(result.mutant_scores);
  return result;
}

double muse_alpha(std::size_t fail_to_pass, std::size_t pass_to_fail, std::size_t total_failing,
                  std::size_t total_passing) noexcept {
  if (pass_to_fail == 0 || total_failing == 0) return 0.0;
  return (static_cast<double>(fail_to_pass) / static_cast<double>(total_failing)) *
         (static_cast<double>(total_passing) / static_cast<double>(pass_to_fail));
}

double muse_term(const MutantStats& s, double alpha, std::size_t total_failing,
                 std::size_t total_passing) noexcept {
  if (s.nonviable) return 0.0;
  const double fail_part =
      total_failing ? static_cast<double>(s.n_fail_impacted) / static_cast<double>(total_failing) : 0.0;
  const double pass_part =
      total_passing ? static_cast<double>(s.n_pass_impacted) / static_cast<double>(total_passing) : 0.0;
  return fail_part - alpha * pass_part;
}

LayerScore muse_layer(std::size_t layer_id, std::span<const MutantStats> stats, double alpha,
                      std::size_t total_failing, std::size_t total_passing) {
  LayerScore result{layer_id, 0.0, {}};
  double sum = 0.0;
  for (const MutantStats& s : stats) {
    const double term = muse_term(s, alpha, total_failing, total_passing);
    sum += term;
    result.mutant_scores.push_back({s.id, term});
  }
  if (!stats.empty()) result.score = sum / static_cast<double>(stats.size());
  sort_mutants(result.mutant_scores);
  return result;
}

std::vector<LayerScore> rank(std::vector<LayerScore> layer_scores) {
  std::sort(layer_scores.begin(), layer_scores.end(), [](const LayerScore& a, const LayerScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.layer_id < b.layer_id;
  });
  for (auto& layer : layer_scores) sort_mutants(layer.mutant_scores);
  return layer_scores;
}

const MutantRecord* SuspiciousnessReport::find_mutant(std::size_t id) const noexcept {
  auto it = std::lower_bound(mutants.begin(), mutants.end(), id,
                             [](const MutantRecord& r, std::size_t v) { return r.stats.id < v; });
  return it != mutants.end() && it->stats.id == id ? &*it : nullptr;
}

SuspiciousnessReport score_layers(Formula formula, ImpactType impact, double threshold,
                                  std::size_t layer_count, const ExecutionMatrix& matrix,
                                  std::span<const MutantDescriptor> mutants,
                                  const SplitResult& split) {
  if (formula == Formula::muse && impact != ImpactType::type1)
    throw std::invalid_argument("MUSE is defined over type-1 impact only");

  SuspiciousnessReport report;
  report.formula = formula;
  report.impact = impact;
  report.threshold = threshold;
  report.totals.failing = split.failing_ids.size();
  report.totals.passing = split.passing_ids.size();
  report.totals.mutants = mutants.size();
  report.totals.nonviable = matrix.nonviable_rows();
  report.matrix = {matrix.rows(), matrix.cols(), matrix.impacted_cells(), matrix.nonviable_rows()};

  const std::vector<MutantStats> stats = collect_stats(matrix, mutants, split);
  std::vector<std::vector<MutantStats>> per_layer(layer_count);
  for (const MutantStats& s : stats) {
    if (s.layer_id == 0 || s.layer_id > layer_count)
      throw std::invalid_argument("mutant targets a layer outside the model");
    per_layer[s.layer_id - 1].push_back(s);
  }

  const std::size_t tf = report.totals.failing;
  const std::size_t tp = report.totals.passing;
  if (formula == Formula::muse) {
    report.flips = count_flips(matrix, split);
    report.alpha = muse_alpha(report.flips.fail_to_pass, report.flips.pass_to_fail, tf, tp);
    if (report.flips.pass_to_fail == 0 && tf > 0)
      report.warnings.push_back("no mutant turned a passing test into a failing one; alpha set to 0");
  }

  std::vector<LayerScore> layers;
  layers.reserve(layer_count);
  for (std::size_t id = 1; id <= layer_count; ++id) {
    const auto& group = per_layer[id - 1];
    switch (formula) {
      case Formula::metallaxis_sbi: layers.push_back(metallaxis_layer(id, group, Kernel::sbi, tf)); break;
      case Formula::metallaxis_ochiai:
        layers.push_back(metallaxis_layer(id, group, Kernel::ochiai, tf));
        break;
      case Formula::muse: layers.push_back(muse_layer(id, group, report.alpha, tf, tp)); break;
    }
  }
  report.layers = rank(std::move(layers));

  std::map<std::size_t, double> mutant_score;
  for (const LayerScore& layer : report.layers)
    for (const MutantScore& ms : layer.mutant_scores) mutant_score[ms.id] = ms.score;
  report.mutants.reserve(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i)
    report.mutants.push_back({stats[i], mutants[i].description, mutant_score[stats[i].id]});
  std::sort(report.mutants.begin(), report.mutants.end(),
            [](const MutantRecord& a, const MutantRecord& b) { return a.stats.id < b.stats.id; });

  if (split.no_failing_tests)
    report.warnings.push_back("no failing tests; every suspiciousness score is 0");
  if (mutants.empty()) report.warnings.push_back("empty mutant pool; every suspiciousness score is 0");
  return report;
}

}  // namespace nnmbfl
