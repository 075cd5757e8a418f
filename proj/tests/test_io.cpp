#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "fpslab/io.hpp"
#include "oracles.hpp"

using namespace fpslab;
using io::json;

namespace {

// Through text, the way files travel.
json reparse(const json& j) { return json::parse(j.dump()); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(SeriesJson, OneVariableRoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Series1 s = oracle::random_curve(rng, 25);
    s[3] = cplx{1.0 / 3.0, -std::sqrt(2.0)};
    s[7] = 0.0;
    const Series1 back = io::series1_from_json(reparse(io::to_json(s)));
    ASSERT_EQ(back.order(), s.order());
    for (int n = 0; n <= s.order(); ++n) {
      EXPECT_EQ(back[n].real(), s[n].real());
      EXPECT_EQ(back[n].imag(), s[n].imag());
    }
  }
}

TEST(SeriesJson, TwoVariableRoundTripIsBitExact) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Series2 g = oracle::random_series2(rng, 18, 0.7);
    const Series2 back = io::series2_from_json(reparse(io::to_json(g)));
    ASSERT_EQ(back.order(), g.order());
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.raw()[i], g.raw()[i]);
  }
}

TEST(SeriesJson, OmittedTermsAreZero) {
  const json j = json::parse(R"({"vars": 2, "order": 3, "terms": [[1, 1, 2.5, 0], [0, 3, 0, -1]]})");
  const Series2 g = io::series2_from_json(j);
  EXPECT_EQ(g.at(1, 1), cplx(2.5, 0.0));
  EXPECT_EQ(g.at(0, 3), cplx(0.0, -1.0));
  EXPECT_EQ(g.at(2, 0), cplx{});
  EXPECT_EQ(io::to_json(g)["terms"].size(), 2u);
}

TEST(SeriesJson, RepeatedTermsAccumulate) {
  const json j = json::parse(R"({"vars": 1, "order": 2, "terms": [[1, 1, 0], [1, 2, 1]]})");
  EXPECT_EQ(io::series1_from_json(j)[1], cplx(3.0, 1.0));
}

TEST(SeriesJson, RejectsMalformedInput) {
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 3, "order": 1, "terms": []})")),
               std::invalid_argument);
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 1, "terms": []})")), std::invalid_argument);
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 1, "order": -1, "terms": []})")),
               std::invalid_argument);
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 1, "order": 2, "terms": [[3, 1, 0]]})")),
               std::invalid_argument);
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 2, "order": 2, "terms": [[2, 1, 1, 0]]})")),
               std::invalid_argument);
  EXPECT_THROW(io::series_from_json(json::parse(R"({"vars": 2, "order": 2, "terms": [[1, 1, 0]]})")),
               std::invalid_argument);
  EXPECT_THROW(io::series1_from_json(io::to_json(Series2(2))), std::invalid_argument);
  EXPECT_THROW(io::series2_from_json(io::to_json(Series1(2))), std::invalid_argument);
}

TEST(LedgerJson, NegativeInfinityTravelsAsNull) {
  const MagnitudeLedger l({kNegInf, 0.0, std::log(3.0), -1.25});
  const json j = reparse(io::to_json(l));
  EXPECT_TRUE(j[0].is_null());
  const MagnitudeLedger back = io::ledger_from_json(j);
  ASSERT_EQ(back.size(), l.size());
  for (int n = 0; n <= l.max_degree(); ++n) EXPECT_EQ(back[n], l[n]);
  EXPECT_THROW(io::ledger_from_json(json::object()), std::invalid_argument);
}

TEST(SampleSetJson, RoundTripKeepsPointsWindowAndShape) {
  const SampleSet seg = segment_sample(cplx{-2.0, 0.0}, cplx{2.0, 0.0}, 16.0);
  const SampleSet back = io::sample_set_from_json(reparse(io::to_json(seg)));
  ASSERT_EQ(back.size(), seg.size());
  for (std::size_t k = 0; k < seg.size(); ++k) EXPECT_EQ(back.points()[k], seg.points()[k]);
  EXPECT_EQ(back.window(), seg.window());
  EXPECT_EQ(back.label(), seg.label());
  const auto* shape = std::get_if<IntervalShape>(&back.shape());
  ASSERT_NE(shape, nullptr);
  EXPECT_EQ(shape->a, cplx(-2.0, 0.0));

  const SampleSet disk = disk_sample(cplx{0.5, 0.0}, 2.0, 8.0);
  const auto* d = std::get_if<DiskShape>(&io::sample_set_from_json(reparse(io::to_json(disk))).shape());
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->radius, 2.0);

  const SampleSet fin = finite_set({1.0, cplx{0.0, 1.0}});
  EXPECT_TRUE(io::sample_set_from_json(reparse(io::to_json(fin))).is_finite_set());
}

TEST(SampleSetJson, MinimalDocumentAndErrors) {
  const SampleSet E = io::sample_set_from_json(json::parse(R"({"points": [[1, 0], [0, 2]]})"));
  EXPECT_EQ(E.size(), 2u);
  EXPECT_DOUBLE_EQ(E.window().first, 1.0);
  EXPECT_DOUBLE_EQ(E.window().second, 2.0);
  EXPECT_THROW(io::sample_set_from_json(json::parse(R"({"label": "x"})")), std::invalid_argument);
  EXPECT_THROW(io::sample_set_from_json(json::parse(R"({"points": [[1, 0, 0]]})")), std::invalid_argument);
  EXPECT_THROW(io::sample_set_from_json(json::parse(R"({"points": [[1, 0]], "shape": {"kind": "blob"}})")),
               std::invalid_argument);
  EXPECT_THROW(io::sample_set_from_json(json::parse(R"({"points": [[3, 0]], "window": [0, 1]})")),
               precondition_error);
}

TEST(ConfigJson, RoundTripAndPartialOverride) {
  DiagnosticConfig c;
  c.divergence_index = 0.4;
  c.window_length = 30;
  c.flat_floor = 1e-6;
  const DiagnosticConfig back = io::config_from_json(reparse(io::to_json(c)));
  EXPECT_EQ(back.divergence_index, 0.4);
  EXPECT_EQ(back.window_length, 30);
  EXPECT_EQ(back.flat_floor, 1e-6);
  EXPECT_EQ(io::to_json(back), io::to_json(c));

  const DiagnosticConfig partial = io::config_from_json(json::parse(R"({"slope_cap": 3.0})"));
  EXPECT_EQ(partial.slope_cap, 3.0);
  EXPECT_EQ(partial.min_window, DiagnosticConfig{}.min_window);
}

TEST(Numbers, ShortestRoundTripText) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) EXPECT_EQ(std::stod(io::number(v)), v);
  EXPECT_EQ(io::number(0.1), "0.1");
  EXPECT_EQ(io::number(INFINITY), "inf");
  EXPECT_EQ(io::number(-INFINITY), "-inf");
  EXPECT_EQ(io::number(std::nan("")), "nan");
  EXPECT_TRUE(io::num(INFINITY).is_null());
  EXPECT_THROW(io::cplx_from(json::parse("[1]")), std::invalid_argument);
}

TEST(Csv, SeriesAndTables) {
  Series1 h(3);
  h[1] = 1.0;
  h[3] = cplx{0.5, -1.0};
  EXPECT_EQ(io::series_csv(h), "i,re,im\n1,1,0\n3,0.5,-1\n");

  Series2 g(3);
  g.at(1, 1) = 1.0;
  EXPECT_EQ(io::series_csv(g), "i,j,re,im\n1,1,1,0\n");

  Series1 x2(4);
  x2[2] = 1.0;
  const DTable d = d_table(g, x2, WeightPair(1, 1));
  // g(s x, s x^2) = s^2 x^3: the only nonzero entry is d(3, 2).
  EXPECT_EQ(io::dtable_csv(d), "p,q,re,im\n3,2,1,0\n");
}

TEST(Csv, VerdictTableHasOneRowPerParameter) {
  std::mt19937_64 rng(5);
  const Series2 g = oracle::random_series2(rng, 24, 0.5);
  const Series1 h = oracle::random_curve(rng, 24);
  const SampleSet E = finite_set({1.0, 2.0, cplx{0.0, 1.5}});
  const SweepReport s = restriction_sweep(g, h, WeightPair(1, 1), E, {});
  const auto rows = lines(io::verdict_csv(s));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "param_re,param_im,slope,radius,verdict,confidence");
  EXPECT_EQ(rows[1].rfind("1,0,", 0), 0u);
}

TEST(Reports, ScenarioReportCarriesHypothesesAndSweep) {
  const ScenarioInputs in = convergent_fixture(ScenarioKind::cor15, 3, 24);
  const ScenarioReport r = run_scenario(ScenarioKind::cor15, in, {});
  const json j = reparse(io::to_json(r));
  EXPECT_EQ(j["scenario"], "cor15");
  EXPECT_EQ(j["hypotheses"].size(), r.hypotheses.size());
  EXPECT_EQ(j["sweep"]["rows"].size(), r.sweep.rows.size());
  EXPECT_EQ(j["consistent"], r.consistent);
  EXPECT_EQ(j["conclusion"]["verdict"], to_string(r.conclusion.verdict));
}

TEST(Reports, SliceAndDTableDocuments) {
  Series2 g(2);
  g.at(2, 0) = 1.0;
  g.at(1, 1) = 1.0;
  g.at(0, 2) = 1.0;
  const SliceDecomposition dec = slices(g, WeightPair(1, 2));
  std::vector<int> qs;
  for (const Slice& s : dec.slices()) {
    if (s.part.is_zero()) continue;
    const json j = io::to_json(s);
    qs.push_back(j["q"].get<int>());
    const Series2 part = io::series2_from_json(j["part"]);
    for (std::size_t i = 0; i < part.size(); ++i) EXPECT_EQ(part.raw()[i], s.part.raw()[i]);
  }
  EXPECT_EQ(qs, (std::vector<int>{2, 3, 4}));

  Series1 x(2);
  x[1] = 1.0;
  const json dj = io::to_json(d_table(g, x, WeightPair(1, 1)));
  EXPECT_EQ(dj["weights"], json({1, 1}));
  EXPECT_EQ(dj["rows"].size(), 3u);
}

TEST(Files, WriteThenReadBack) {
  const auto path = (std::filesystem::temp_directory_path() / "fpslab_io_roundtrip.json").string();
  Series1 s(2);
  s[1] = cplx{0.25, 0.75};
  io::write_text(path, io::to_json(s).dump());
  EXPECT_EQ(io::series1_from_json(io::read_json(path))[1], s[1]);
  io::write_text(path, "{ not json");
  EXPECT_THROW(io::read_json(path), std::invalid_argument);
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_text(path), std::runtime_error);
}
