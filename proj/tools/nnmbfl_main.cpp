// Command-line driver: mutation-based fault localization of a sequential
// network against a labelled dataset.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nnmbfl/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace nnmbfl;

  CLI::App app{"Rank the layers of a sequential neural network by suspiciousness using "
               "mutation-based fault localization"};
  app.set_version_flag("--version", "nnmbfl 1.0.0");

  RunConfig config;
  std::string formula = "metallaxis-sbi";
  std::string impact;
  std::string out_format = "text";
  std::string out_path;
  std::string matrix_path;
  std::size_t top = 0;
  bool demo = false;
  bool list = false;

  app.add_option("--model", config.model_path, "Model file (neutral format)")->required();
  app.add_option("--data", config.data_path, "Dataset file (neutral format)");
  app.add_option("--formula", formula, "muse | metallaxis-sbi | metallaxis-ochiai")
      ->check(CLI::IsMember({"muse", "metallaxis-sbi", "metallaxis-ochiai"}))
      ->capture_default_str();
  app.add_option("--impact", impact, "type1 | type2 (default: type1 for muse, type2 otherwise)")
      ->check(CLI::IsMember({"type1", "type2"}));
  app.add_option("--threshold", config.threshold, "Regression comparison threshold")
      ->capture_default_str();
  app.add_option("--select-fraction", config.select_fraction, "Fraction of mutants to keep, in (0, 1]")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for mutant selection")->capture_default_str();
  app.add_option("--workers", config.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", out_path, "Write the full report to this file");
  app.add_option("--out-format", out_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--dump-matrix", matrix_path, "Write the execution matrix (JSON) to this file");
  app.add_option("--top", top, "Show only the first N layers on standard output (0 = all)");
  app.add_flag("--demo-profile", demo,
               "Restrict the catalog to: halve neuron weights, halve neuron bias, swap relu/softmax");
  app.add_flag("--list-mutants", list, "Print the mutant pool and exit without executing it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  config.formula = *parse_formula(formula);
  if (!impact.empty()) config.impact = impact == "type2" ? ImpactType::type2 : ImpactType::type1;
  config.out_format = *parse_report_format(out_format);
  if (!out_path.empty()) config.out = out_path;
  if (!matrix_path.empty()) config.dump_matrix = matrix_path;
  if (top > 0) config.top = top;
  if (demo) config.catalog = Catalog::demo;

  if (!list && config.data_path.empty()) {
    std::cerr << "error: --data is required unless --list-mutants is given\n";
    return kExitInputError;
  }

  const RunResult result = list ? describe_mutants(config) : run(config);
  std::cout << result.console;
  std::cerr << result.diagnostics;
  return result.exit_code;
}
