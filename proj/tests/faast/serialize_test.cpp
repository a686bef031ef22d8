#include <gtest/gtest.h>

#include <filesystem>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/faast/serialize.hpp"
#include "test_support.hpp"

using namespace tepgnn::faast;

namespace {
FaAstGraph listing_graph() {
  FaAstGraph g = build_fa_ast(tepgnn::testing::parse_fixture("java/WeatherAPITest.java"));
  g.source_path = "WeatherAPITest.java";
  g.label_ms = 123.5;
  return g;
}
}  // namespace

TEST(GraphFormat, JsonLayout) {
  auto j = to_json(listing_graph());
  EXPECT_EQ(j["format_version"], kGraphFormatVersion);
  EXPECT_EQ(j["kinds"][0], "CompilationUnit");
  EXPECT_TRUE(j["values"][0].is_null());
  EXPECT_EQ(j["edges"][0].size(), 3u);
  EXPECT_EQ(j["label_ms"], 123.5);
  EXPECT_EQ(j["num_nodes"].get<std::size_t>(), j["kinds"].size());
}

// Both encodings reproduce the graph exactly, with and without a label.
TEST(GraphFormat, RoundTripsAreLossless) {
  for (bool labelled : {true, false}) {
    FaAstGraph g = listing_graph();
    if (!labelled) g.label_ms.reset();
    EXPECT_EQ(graph_from_json(to_json(g)), g);
    EXPECT_EQ(graph_from_binary(to_binary(g)), g);
  }
}

TEST(GraphFormat, BinaryIsDeterministicAndVersioned) {
  std::string a = to_binary(listing_graph());
  std::string b = to_binary(listing_graph());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, 4), "FAAG");
  EXPECT_EQ(static_cast<unsigned char>(a[4]), kGraphFormatVersion);
}

TEST(GraphFormat, RejectsCorruptInput) {
  std::string bytes = to_binary(listing_graph());
  EXPECT_THROW(graph_from_binary(bytes.substr(0, bytes.size() - 3)), FormatError);
  std::string wrong_version = bytes;
  wrong_version[4] = 9;
  EXPECT_THROW(graph_from_binary(wrong_version), FormatError);
  auto j = to_json(listing_graph());
  j["edges"][0][2] = 10;
  EXPECT_THROW(graph_from_json(j), FormatError);
  auto k = to_json(listing_graph());
  k["edges"][0][1] = 100000;
  EXPECT_THROW(graph_from_json(k), FormatError);
}

TEST(GraphFormat, SaveAndLoadByExtension) {
  auto dir = std::filesystem::temp_directory_path() / "tepgnn_graph_io";
  std::filesystem::remove_all(dir);
  FaAstGraph g = listing_graph();
  save_graph(g, dir / "g.json");
  save_graph(g, dir / "g.faag");
  EXPECT_EQ(load_graph(dir / "g.json"), g);
  EXPECT_EQ(load_graph(dir / "g.faag"), g);
  std::filesystem::remove_all(dir);
}
