#include "nnmbfl/pipeline.hpp"

#include <cstdio>

#include "nnmbfl/errors.hpp"
#include "nnmbfl/model_io.hpp"
#include "nnmbfl/splitter.hpp"

namespace nnmbfl {

namespace {

RunResult input_error(const std::string& message) {
  RunResult r;
  r.exit_code = kExitInputError;
  r.diagnostics = "error: " + message + "\n";
  return r;
}

}  // namespace

std::string format_mutant_listing(const std::vector<MutantDescriptor>& pool) {
  std::string out;
  for (const MutantDescriptor& d : pool) {
    char head[48];
    std::snprintf(head, sizeof head, "M%-5zu layer %-3zu ", d.id, d.layer_id);
    out += head;
    out += std::string(to_string(d.mutator)) + " " + to_string(d.operation) + "  " + d.description + "\n";
  }
  return out;
}

RunResult describe_mutants(const RunConfig& config) {
  try {
    const SequentialModel model = load_model(config.model_path);
    const auto pool = generate_mutants(model, config.catalog);
    RunResult r;
    r.console = format_mutant_listing(pool);
    if (pool.empty()) r.diagnostics = "warning: no mutator applies to this model; the pool is empty\n";
    return r;
  } catch (const Error& e) {
    return input_error(e.what());
  }
}

RunResult run(const RunConfig& config) {
  if (!(config.select_fraction > 0.0 && config.select_fraction <= 1.0))
    return input_error("--select-fraction must be in (0, 1]");
  if (!(config.threshold >= 0.0)) return input_error("--threshold must be non-negative");
  if (config.formula == Formula::muse && config.impact == ImpactType::type2)
    return input_error("MUSE only supports type1 impact; drop --impact or pass --impact type1");
  const ImpactType impact =
      config.impact.value_or(config.formula == Formula::muse ? ImpactType::type1 : ImpactType::type2);

  RunResult result;
  try {
    const SequentialModel model = load_model(config.model_path);
    const Dataset dataset = load_dataset(config.data_path);
    if (dataset.points.front().input.shape() != model.input_shape)
      return input_error(config.data_path.string() + ": inputs have shape " +
                         to_string(dataset.points.front().input.shape()) + ", model expects " +
                         to_string(model.input_shape));

    auto mutants = generate_mutants(model, config.catalog);
    if (!mutants.empty() && config.select_fraction < 1.0)
      mutants = select_mutants(mutants, config.select_fraction, config.seed);

    const MatchPolicy policy{dataset.task, config.threshold};
    SplitResult split_result;
    try {
      split_result = split(model, dataset, policy, config.workers);
    } catch (const ShapeError& e) {
      return input_error(config.data_path.string() + ": " + e.reason());
    }

    const ExecutionMatrix matrix =
        build_matrix(model, mutants, dataset, split_result, policy, impact, config.workers);
    SuspiciousnessReport report = score_layers(config.formula, impact, config.threshold,
                                               model.layers.size(), matrix, mutants, split_result);

    if (config.out) save_report(report, *config.out, config.out_format);
    if (config.dump_matrix) write_text_file(*config.dump_matrix, render_matrix(matrix, impact));

    result.console = render_report(report, ReportFormat::text, config.top);
    for (const std::string& w : report.warnings) result.diagnostics += "warning: " + w + "\n";
    result.exit_code = split_result.no_failing_tests ? kExitVacuous : kExitOk;
    result.report = std::move(report);
    return result;
  } catch (const Error& e) {
    return input_error(e.what());
  }
}

}  // namespace nnmbfl
