#include <gtest/gtest.h>

#include "levysid/config.hpp"
#include "levysid/errors.hpp"
#include "levysid/report.hpp"
#include "levysid/simulate.hpp"
#include "scratch_dir.hpp"

using namespace levysid;
using nlohmann::json;

namespace {

RunReport sample_report() {
  auto config = parse_model_config(json::parse(R"({
    "dimension": 2,
    "drift": ["1 - x1", "-x2"],
    "gaussian": [["0.5", "0"], ["0", "0.3"]],
    "levy": [{"alpha": 1.2, "beta": 0.3, "sigma": 0.4}, {"alpha": 0.8, "beta": -0.2, "sigma": 0.5}],
    "grid": {"bounds": [[0, 2], [-1, 1]], "mesh": [400, 400]},
    "h": 0.01
  })"));
  const auto data = simulate_pairs(config.model, config.grid.points(), config.h, 17);
  EstimationSettings settings;
  settings.config.bins = 1;
  const auto result = identify(data, settings.build_dictionary(2), settings.config);
  RunReport report = make_report(result, data.size(), data.h());
  report.config = {{"estimation", estimation_config_to_json(settings)}, {"model", model_config_to_json(config)}};
  report.seed = 17;
  return report;
}

}  // namespace

TEST(Report, ContentsReflectTheRun) {
  const auto r = sample_report();
  EXPECT_EQ(r.dimension, 2u);
  EXPECT_EQ(r.rows, 160000u);
  EXPECT_EQ(r.levy.size(), 2u);
  EXPECT_EQ(r.functions.size(), 6u);
  EXPECT_EQ(r.dictionary, "poly:2");
  ASSERT_EQ(r.drift.components.size(), 2u);
  EXPECT_EQ(r.drift.components[1].label, "b2");
  ASSERT_EQ(r.diffusion.components.size(), 3u);
  EXPECT_EQ(r.diffusion.components[1].label, "a12");
  EXPECT_GT(r.survival_fraction, 0.5);
  EXPECT_LE(r.survival_fraction, 1.0);
  EXPECT_FALSE(r.timings.has_value());
}

TEST(Report, SerialisationRoundTripIsByteIdentical) {
  const auto r = sample_report();
  const std::string text = serialize_report(r);
  const auto back = parse_report(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(serialize_report(back), text);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(json::parse(text)["format"], kReportFormat);

  levysid::testing::ScratchDir dir;
  write_report(r, dir.file("r.json"));
  EXPECT_EQ(levysid::testing::slurp(dir.file("r.json")), text);
  EXPECT_EQ(read_report(dir.file("r.json")), r);
}

TEST(Report, TableRebuildsLearnedExpansions) {
  const auto r = sample_report();
  const auto table = report_table(r);
  const std::vector<double> x{0.7, -0.2};
  const auto& c = r.drift.components[0].coefficients;
  const double expected = c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[0] * x[0] + c[4] * x[0] * x[1] +
                          c[5] * x[1] * x[1];
  EXPECT_NEAR(table.evaluate_drift(0, x), expected, 1e-12);
}

TEST(Report, RejectsMalformedDocuments) {
  const auto doc = report_to_json(sample_report());
  auto expect_field = [](json d, const std::string& field) {
    try {
      report_from_json(d);
      ADD_FAILURE() << "accepted";
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  auto d = doc;
  d["format"] = "other";
  expect_field(d, "$.format");
  d = doc;
  d["levy"][1].erase("sigma");
  expect_field(d, "$.levy[1].sigma");
  d = doc;
  d["drift"]["components"][0]["coefficients"][2] = "x";
  expect_field(d, "$.drift.components[0].coefficients");
  EXPECT_THROW(parse_report("{"), DataError);

  d = doc;
  d["dictionary"]["functions"][1] = "x9";
  EXPECT_THROW(report_table(report_from_json(d)), Error);
}
