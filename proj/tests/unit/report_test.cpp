#include <gtest/gtest.h>

#include <json.hpp>

#include "nnmbfl/report.hpp"

namespace nnmbfl {
namespace {

SuspiciousnessReport sample() {
  SuspiciousnessReport r;
  r.formula = Formula::metallaxis_sbi;
  r.impact = ImpactType::type2;
  r.layers = {{2, 1.0, {{9, 1.0}, {12, 1.0}, {7, 2.0 / 3.0}}}, {1, 0.0, {{1, 0.0}}}};
  r.mutants = {{{1, 1, 0, 1, false}, "halved the weights of layer 1, neuron 1", 0.0},
               {{7, 2, 2, 1, false}, "halved the weights of layer 2, neuron 1", 2.0 / 3.0},
               {{9, 2, 4, 0, false}, "replaced activation function 'relu' with 'softmax' of layer 2, neuron 1", 1.0},
               {{12, 2, 4, 0, false}, "replaced activation function 'relu' with 'softmax' of layer 2, neuron 2", 1.0}};
  r.totals = {4, 2, 4, 0};
  r.matrix = {4, 6, 12, 0};
  return r;
}

TEST(RenderText, FirstLineNamesTopLayer) {
  const std::string text = render_report(sample(), ReportFormat::text);
  EXPECT_EQ(text.substr(0, text.find('\n')), "layer 2  score 1.0000  rank 1  (3 mutants)");
  EXPECT_NE(text.find("  M9     1.0000  replaced activation function 'relu' with 'softmax' of layer 2, neuron 1\n"),
            std::string::npos);
  EXPECT_LT(text.find("M9 "), text.find("M12 "));
  EXPECT_LT(text.find("M12 "), text.find("M7 "));
  EXPECT_NE(text.find("formula metallaxis-sbi, impact type2, threshold 0.001\n"), std::string::npos);
  EXPECT_NE(text.find("failing tests 4, passing tests 2, mutants 4, nonviable 0\n"), std::string::npos);
  EXPECT_EQ(text.find("alpha"), std::string::npos);
}

TEST(RenderText, TopLimitsLayersAndWarningsAreListed) {
  auto r = sample();
  r.warnings = {"the mutant pool is empty"};
  const std::string text = render_report(r, ReportFormat::text, 1);
  EXPECT_EQ(text.find("layer 1 "), std::string::npos);
  EXPECT_NE(text.find("warning: the mutant pool is empty\n"), std::string::npos);
}

TEST(RenderText, NonviableMarkerAndMuseAlpha) {
  auto r = sample();
  r.formula = Formula::muse;
  r.impact = ImpactType::type1;
  r.alpha = 1.0;
  r.mutants[0].stats.nonviable = true;
  const std::string text = render_report(r, ReportFormat::text);
  EXPECT_NE(text.find("layer 1, neuron 1  [nonviable]\n"), std::string::npos);
  EXPECT_NE(text.find("alpha 1.0000\n"), std::string::npos);
}

TEST(RenderJson, CarriesScoresCountsAndSummary) {
  const auto j = nlohmann::json::parse(render_report(sample(), ReportFormat::json));
  EXPECT_EQ(j["formula"], "metallaxis-sbi");
  EXPECT_EQ(j["impact_type"], "type2");
  EXPECT_EQ(j["layers"][0]["id"], 2);
  EXPECT_EQ(j["layers"][0]["mutants"][2]["id"], 7);
  EXPECT_EQ(j["layers"][0]["mutants"][2]["score"].get<double>(), 2.0 / 3.0);
  EXPECT_EQ(j["layers"][0]["mutants"][2]["n_fail_impacted"], 2);
  EXPECT_EQ(j["totals"]["T_f"], 4);
  EXPECT_EQ(j["matrix"]["impacted_cells"], 12);
  EXPECT_FALSE(j.contains("muse"));
  EXPECT_TRUE(j["warnings"].empty());
}

TEST(RenderJson, Deterministic) {
  EXPECT_EQ(render_report(sample(), ReportFormat::json), render_report(sample(), ReportFormat::json));
}

TEST(RenderMatrix, CellGlyphs) {
  ExecutionMatrix m({3, 5}, 3);
  m.set(0, 1, Cell::impacted);
  m.mark_nonviable(1);
  const auto j = nlohmann::json::parse(render_matrix(m, ImpactType::type1));
  EXPECT_EQ(j["matrix"][0]["cells"], ".I.");
  EXPECT_EQ(j["matrix"][1]["cells"], "ooo");
  EXPECT_EQ(j["matrix"][1]["mutant"], 5);
  EXPECT_EQ(j["matrix"][1]["nonviable"], true);
}

TEST(ReportFormat, Parse) {
  EXPECT_EQ(parse_report_format("json"), ReportFormat::json);
  EXPECT_EQ(parse_report_format("text"), ReportFormat::text);
  EXPECT_EQ(parse_report_format("yaml"), std::nullopt);
}

}  // namespace
}  // namespace nnmbfl
