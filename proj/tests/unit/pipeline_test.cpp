#include <gtest/gtest.h>

#include "nnmbfl/model_io.hpp"
#include "nnmbfl/pipeline.hpp"
#include "test_support.hpp"

namespace nnmbfl {
namespace {

using testing::fixture;

RunConfig triangle_config(Formula formula) {
  RunConfig c;
  c.model_path = fixture("triangle_model.json");
  c.data_path = fixture("triangle_data.json");
  c.formula = formula;
  c.catalog = Catalog::demo;
  c.workers = 2;
  return c;
}

TEST(Run, MuseDemoRanksLayerTwoFirst) {
  const RunResult r = run(triangle_config(Formula::muse));
  ASSERT_EQ(r.exit_code, kExitOk) << r.diagnostics;
  ASSERT_TRUE(r.report);
  EXPECT_EQ(r.report->layers[0].layer_id, 2u);
  EXPECT_NEAR(r.report->layers[0].score, 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(r.report->layers[1].score, -1.0 / 6.0, 1e-12);
  EXPECT_EQ(r.report->impact, ImpactType::type1);
  EXPECT_EQ(r.console.rfind("layer 2 ", 0), 0u);
}

TEST(Run, MetallaxisDefaultsToType2) {
  const RunResult r = run(triangle_config(Formula::metallaxis_sbi));
  ASSERT_EQ(r.exit_code, kExitOk) << r.diagnostics;
  EXPECT_EQ(r.report->impact, ImpactType::type2);
  EXPECT_EQ(r.report->layers[0].layer_id, 2u);
  EXPECT_NEAR(r.report->layers[0].score, 0.8, 1e-12);
  EXPECT_NEAR(r.report->layers[1].score, 2.0 / 3.0, 1e-12);
}

TEST(Run, MuseWithType2IsRejected) {
  auto c = triangle_config(Formula::muse);
  c.impact = ImpactType::type2;
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_NE(r.diagnostics.find("MUSE"), std::string::npos);
}

TEST(Run, BadInputsExitTwo) {
  auto c = triangle_config(Formula::muse);
  c.model_path = fixture("missing.json");
  EXPECT_EQ(run(c).exit_code, kExitInputError);
  c = triangle_config(Formula::muse);
  c.select_fraction = 0.0;
  EXPECT_EQ(run(c).exit_code, kExitInputError);
  c = triangle_config(Formula::muse);
  c.data_path = fixture("image_data.json");
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_NE(r.diagnostics.find("model expects"), std::string::npos);
}

TEST(Run, NoFailingTestsExitsThree) {
  testing::TempDir dir;
  const SequentialModel m{{2}, {testing::dense(2, 2, {1, 0, 0, 1}, {0, 0})}};
  const Dataset ds{Task::classification, 2,
                   {{1, Tensor::vector({1, 0}), ClassLabel{0}}, {2, Tensor::vector({0, 1}), ClassLabel{1}}}};
  save_model(m, dir / "m.json");
  save_dataset(ds, dir / "d.json");
  RunConfig c;
  c.model_path = dir / "m.json";
  c.data_path = dir / "d.json";
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitVacuous);
  ASSERT_TRUE(r.report);
  for (const auto& l : r.report->layers) EXPECT_EQ(l.score, 0.0);
  EXPECT_NE(r.diagnostics.find("warning"), std::string::npos);
}

TEST(Run, WritesReportAndMatrixFiles) {
  testing::TempDir dir;
  auto c = triangle_config(Formula::metallaxis_ochiai);
  c.out = dir / "report.json";
  c.out_format = ReportFormat::json;
  c.dump_matrix = dir / "matrix.json";
  ASSERT_EQ(run(c).exit_code, kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "matrix.json"));
  const std::string first = read_text_file(dir / "report.json");
  ASSERT_EQ(run(c).exit_code, kExitOk);
  EXPECT_EQ(read_text_file(dir / "report.json"), first);
}

TEST(Run, TopLimitsConsole) {
  auto c = triangle_config(Formula::muse);
  c.top = 1;
  const RunResult r = run(c);
  EXPECT_EQ(r.console.find("layer 1 "), std::string::npos);
}

TEST(Run, SelectionReducesPool) {
  auto c = triangle_config(Formula::muse);
  c.select_fraction = 0.5;
  c.seed = 4;
  const RunResult r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report->totals.mutants, 6u);
}

TEST(DescribeMutants, ListsPool) {
  const RunResult r = describe_mutants(triangle_config(Formula::muse));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(std::count(r.console.begin(), r.console.end(), '\n'), 12);
  EXPECT_EQ(r.console.rfind("M1     layer 1   MATH_WEIGHT div2  halved the weights of layer 1, neuron 1\n", 0), 0u);
}

}  // namespace
}  // namespace nnmbfl
