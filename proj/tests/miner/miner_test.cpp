#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tepgnn/io.hpp"
#include "tepgnn/miner/miner.hpp"
#include "tepgnn/rng.hpp"
#include "test_support.hpp"

using namespace tepgnn;
using namespace tepgnn::miner;

namespace {

// Hand-computed means from expected_times.csv, seconds.
std::map<std::string, double> spreadsheet() {
  std::istringstream in(tepgnn::testing::read_fixture("surefire/expected_times.csv"));
  std::string line;
  std::getline(in, line);
  std::map<std::string, double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out[line.substr(0, line.find(','))] = std::stod(line.substr(line.rfind(',') + 1));
  }
  return out;
}

std::size_t malformed_offset(std::string_view xml) {
  try {
    parse_surefire_xml(xml);
  } catch (const MalformedReport& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no MalformedReport for: " << xml;
  return 0;
}

}  // namespace

TEST(Surefire, TestsuiteTime) {
  auto e = parse_surefire_xml(R"(<testsuite time="1.234" name="a.B"/>)", "r");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], (TestReportEntry{"a.B", 1.234, "r"}));
}

TEST(Surefire, TestcasesSumPerClass) {
  auto e = parse_surefire_xml(
      "<testsuite name=\"s\">"
      "<testcase classname=\"a.B\" name=\"x\" time=\"0.1\"/>"
      "<testcase classname=\"a.C\" name=\"x\" time=\"0.5\"/>"
      "<testcase classname=\"a.B\" name=\"y\" time=\"0.2\"/>"
      "<testcase classname=\"a.B\" name=\"z\" time=\"0.3\"/>"
      "</testsuite>");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].class_name, "a.B");
  EXPECT_NEAR(e[0].time_s, 0.6, 1e-12);
  EXPECT_EQ(e[1].class_name, "a.C");
}

TEST(Surefire, SuiteTimeWinsOverCases) {
  auto e = parse_surefire_xml(
      "<testsuites><testsuite name=\"a.B\" time=\"2.0\">"
      "<testcase classname=\"a.B\" name=\"x\" time=\"0.5\"/></testsuite>"
      "<testsuite name=\"a.C\" time=\"1,234.5\"/></testsuites>");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_DOUBLE_EQ(e[0].time_s, 2.0);
  EXPECT_DOUBLE_EQ(e[1].time_s, 1234.5);
}

TEST(Surefire, LooseTestcasesAndEntities) {
  auto e = parse_surefire_xml(
      "<?xml version=\"1.0\"?>\n<!DOCTYPE r [<!ENTITY x \"y\">]>\n<!-- c -->"
      "<results><testcase classname=\"a.B&amp;C&#x41;\" time=\"1\">"
      "<failure message=\"&lt;expected&gt;\"><![CDATA[</testcase> inside]]></failure></testcase></results>");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].class_name, "a.B&CA");
}

TEST(Surefire, MalformedReportsCarryOffsets) {
  EXPECT_EQ(malformed_offset("<testsuite name=\"a\" time=\"x1\"/>"), 25u);
  EXPECT_EQ(malformed_offset("<testsuite name=\"a\" time=\"-1\"/>"), 25u);
  EXPECT_EQ(malformed_offset("<a><b></a>"), 6u);
  EXPECT_EQ(malformed_offset("<a>"), 3u);
  EXPECT_EQ(malformed_offset("<a x=\"1></a>"), 8u);
  EXPECT_EQ(malformed_offset("<a>&bogus;</a>"), 3u);
  EXPECT_EQ(malformed_offset("<a/><b/>"), 4u);
  EXPECT_EQ(malformed_offset("<a><testcase time=\"1\"/></a>"), 3u);
  EXPECT_EQ(malformed_offset(""), 0u);
  EXPECT_EQ(malformed_offset("junk<a/>"), 0u);
}

TEST(Aggregate, Examples) {
  std::vector<TestReportEntry> one{{"a.B", 1.5, "r1"}, {"a.C", 0.25, "r1"}};
  EXPECT_EQ(aggregate_runs(one), one);
  auto two = aggregate_runs({{"a.B", 1.0, "r1"}, {"a.B", 3.0, "r2"}});
  ASSERT_EQ(two.size(), 1u);
  EXPECT_DOUBLE_EQ(two[0].time_s, 2.0);
  EXPECT_EQ(two[0].run_id, "r1+r2");
  EXPECT_TRUE(aggregate_runs({}).empty());
}

TEST(Aggregate, Idempotent) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TestReportEntry> entries;
    for (int i = 0, n = static_cast<int>(rng.below(30)); i < n; ++i) {
      entries.push_back({"c" + std::to_string(rng.below(6)), rng.uniform(0, 10), "r" + std::to_string(rng.below(4))});
    }
    auto once = aggregate_runs(entries);
    EXPECT_EQ(aggregate_runs(once), once);
  }
}

TEST(Reports, FixtureRunsMatchSpreadsheet) {
  auto entries = read_reports(tepgnn::testing::fixture("surefire/reports"));
  EXPECT_EQ(entries.size(), 19u);  // 5 classes x 4 runs, one report missing
  auto means = aggregate_runs(entries);
  auto expected = spreadsheet();
  ASSERT_EQ(means.size(), expected.size());
  for (const auto& m : means) {
    ASSERT_TRUE(expected.contains(m.class_name)) << m.class_name;
    EXPECT_NEAR(m.time_s, expected.at(m.class_name), 1e-6) << m.class_name;
  }
  EXPECT_EQ(read_reports(tepgnn::testing::fixture("surefire/reports"), 4), entries);
}

TEST(Reports, HandReadSingleFile) {
  auto e = parse_surefire_xml(tepgnn::testing::read_fixture("surefire/reports/run1/TEST-org.h2.test.db.TestMerge.xml"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].class_name, "org.h2.test.db.TestMerge");
  EXPECT_DOUBLE_EQ(e[0].time_s, 0.512);
  auto cache = parse_surefire_xml(tepgnn::testing::read_fixture("surefire/reports/run1/TEST-org.h2.test.unit.TestCache.xml"));
  ASSERT_EQ(cache.size(), 1u);
  EXPECT_NEAR(cache[0].time_s, 0.001, 1e-12);
}

TEST(Reports, ErrorNamesFile) {
  auto dir = std::filesystem::temp_directory_path() / "tepgnn_bad_reports";
  std::filesystem::remove_all(dir);
  io::write_file(dir / "TEST-a.xml", "<testsuite name=\"a\" time=\"oops\"/>");
  try {
    read_reports(dir);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("TEST-a.xml"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("byte 25"), std::string::npos) << e.what();
  }
}

TEST(Pairing, MiniRepo) {
  auto means = aggregate_runs(read_reports(tepgnn::testing::fixture("surefire/reports")));
  auto res = pair_with_sources(means, tepgnn::testing::fixture("surefire/minirepo"));
  ASSERT_EQ(res.rows.size(), 4u);
  ASSERT_EQ(res.unmatched, std::vector<std::string>{"org.h2.test.db.TestGone"});  // only under src/main
  auto expected = spreadsheet();
  for (const auto& row : res.rows) {
    EXPECT_TRUE(std::filesystem::exists(row.source_path));
    EXPECT_TRUE(std::holds_alternative<java::Ast>(java::parse_file(row.source_path)));
    EXPECT_EQ(row.project, "minirepo");
    std::string cls = row.extra["class_name"];
    EXPECT_NEAR(row.execution_time_ms, expected.at(cls) * 1000.0, 1e-6);
    EXPECT_EQ(row.extra.contains("below_precision"), cls == "org.h2.test.unit.TestCache");
    EXPECT_TRUE(row.source_path.ends_with(cls.substr(cls.rfind('.') + 1) + ".java"));
  }
  auto j = nlohmann::json::parse(unmatched_json(res));
  EXPECT_EQ(j["unmatched"].size(), 1u);
}

TEST(Pairing, RootsNestedClassesAndErrors) {
  std::vector<TestReportEntry> entries{{"org.h2.test.db.TestMerge", 1.0, "r"},
                                       {"org.h2.test.db.TestMerge$Inner", 0.5, "r"},
                                       {"org.h2.test.db.TestGone", 1.0, "r"}};
  auto repo = tepgnn::testing::fixture("surefire/minirepo");
  auto res = pair_with_sources(entries, repo, {.roots = {"src/test/java", "src/main/java"}, .project = "h2"});
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_TRUE(res.unmatched.empty());
  EXPECT_DOUBLE_EQ(res.rows[0].execution_time_ms, 1500.0);
  EXPECT_EQ(res.rows[0].project, "h2");
  EXPECT_THROW(pair_with_sources(entries, repo, {.roots = {"test/scala"}}), NoSourceRoots);
  EXPECT_THROW(pair_with_sources(entries, repo / "missing"), NoSourceRoots);
}
