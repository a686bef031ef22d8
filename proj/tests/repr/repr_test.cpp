#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <set>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/java/ast_dump.hpp"
#include "tepgnn/repr/encode.hpp"
#include "tepgnn/repr/vocabulary.hpp"
#include "test_support.hpp"

using namespace tepgnn;
using namespace tepgnn::repr;

namespace {

faast::FaAstGraph graph_of(const std::string& src, std::optional<double> label = std::nullopt) {
  auto g = faast::build_fa_ast(java::parse_source(src, "T.java"));
  g.label_ms = label;
  return g;
}

// Values as they appear in the textual AST dump: the quoted string on each line.
std::set<std::string> dumped_values(const java::Ast& ast) {
  std::set<std::string> out;
  std::string text = java::to_text(ast);
  std::regex re(R"re("((?:[^"\\]|\\.)*)"\s*$)re");
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::smatch m;
    if (std::regex_search(line, m, re)) {
      out.insert(nlohmann::json::parse("\"" + m[1].str() + "\"").get<std::string>());
    }
  }
  return out;
}

}  // namespace

TEST(Vocabulary, EmptyCorpusRejected) {
  std::vector<faast::FaAstGraph> none;
  EXPECT_THROW(build_vocabulary(std::span<const faast::FaAstGraph>(none)), EmptyCorpus);
}

TEST(Vocabulary, TwoValuesGiveThreeEntries) {
  faast::FaAstGraph g;
  g.num_nodes = 3;
  g.node_kinds = {java::NodeKind::ExprStmt, java::NodeKind::Name, java::NodeKind::Name};
  g.node_values = {std::nullopt, "b", "a"};
  std::vector<faast::FaAstGraph> corpus{g};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus));
  EXPECT_EQ(v.value_count(), 3u);
  EXPECT_EQ(v.value_id("a"), 1u);
  EXPECT_EQ(v.value_id("b"), 2u);
  EXPECT_EQ(v.value_id("zzz"), kUnk);
  EXPECT_EQ(v.kind_count(), java::kNodeKindCount);
}

TEST(Vocabulary, FixtureCorpusIsSortedUnionOfTokens) {
  std::vector<faast::FaAstGraph> graphs;
  std::set<std::string> expected;
  for (const auto* rel : {"java/WeatherAPITest.java", "java/ControlMix.java"}) {
    auto ast = tepgnn::testing::parse_fixture(rel);
    auto vals = dumped_values(ast);
    expected.insert(vals.begin(), vals.end());
    graphs.push_back(faast::build_fa_ast(ast));
  }
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(graphs));
  std::vector<std::string> want{"<unk>"};
  want.insert(want.end(), expected.begin(), expected.end());
  EXPECT_EQ(v.values(), want);
}

TEST(Vocabulary, CapKeepsMostFrequent) {
  auto g = graph_of("class A { void m() { x(); x(); x(); y(); y(); z(); } }");
  std::vector<faast::FaAstGraph> corpus{g};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus), {.cap = 2});
  ASSERT_EQ(v.value_count(), 3u);
  EXPECT_NE(v.value_id("x"), kUnk);
  EXPECT_NE(v.value_id("y"), kUnk);
  EXPECT_EQ(v.value_id("z"), kUnk);
}

TEST(Vocabulary, JsonRoundTripIsStable) {
  std::vector<faast::FaAstGraph> corpus{graph_of("class A { int f; void m() { f = 2; } }")};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus));
  auto back = vocabulary_from_json(to_json(v));
  EXPECT_EQ(back, v);
  EXPECT_EQ(to_json(back), to_json(v));
  for (const auto& tok : v.values()) EXPECT_EQ(back.value_id(tok), v.value_id(tok));
}

TEST(Vocabulary, TestSplitTokensMapToUnk) {
  std::vector<faast::FaAstGraph> train{graph_of("class A { void m() { a(); } }")};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(train));
  auto test = graph_of("class A { void m() { unseen(); } }", 5.0);
  auto e = encode(test, v, Normalizer{0, 10});
  auto it = std::find(test.node_values.begin(), test.node_values.end(), "unseen");
  ASSERT_NE(it, test.node_values.end());
  EXPECT_EQ(e.node_value_ids[it - test.node_values.begin()], kUnk);
}

TEST(Normalizer, ThreeLabelCorpus) {
  std::vector<double> labels{100, 300, 500};
  auto n = fit_normalizer(labels);
  EXPECT_DOUBLE_EQ(n.normalize(100), 0.0);
  EXPECT_DOUBLE_EQ(n.normalize(300), 0.5);
  EXPECT_DOUBLE_EQ(n.normalize(500), 1.0);
}

TEST(Normalizer, DegenerateRangeGivesZeroTargets) {
  std::vector<double> labels{42, 42};
  auto n = fit_normalizer(labels);
  EXPECT_TRUE(n.degenerate());
  EXPECT_DOUBLE_EQ(n.normalize(42), 0.0);
}

TEST(Normalizer, OutOfRangeSaturates) {
  Normalizer n{10, 20};
  EXPECT_DOUBLE_EQ(n.normalize(5), 0.0);
  EXPECT_DOUBLE_EQ(n.normalize(25), 1.0);
}

TEST(Normalizer, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.001, 1e5);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    Normalizer n{std::min(a, b), std::max(a, b)};
    double x = n.min_ms + (n.max_ms - n.min_ms) * std::uniform_real_distribution<double>(0, 1)(rng);
    double back = n.denormalize(n.normalize(x));
    EXPECT_NEAR(back, x, 1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST(Encode, ShapesAndTags) {
  auto g = graph_of("class A { void m() { if (a) b(); else c(); } }", 300);
  std::vector<faast::FaAstGraph> corpus{g};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus));
  auto e = encode(g, v, Normalizer{100, 500});
  EXPECT_EQ(e.num_nodes(), g.num_nodes);
  EXPECT_EQ(e.node_value_ids.size(), g.num_nodes);
  EXPECT_EQ(e.edge_kind_ids.size(), e.num_edges());
  EXPECT_EQ(e.edge_dst.size(), e.num_edges());
  ASSERT_TRUE(e.target);
  EXPECT_DOUBLE_EQ(*e.target, 0.5);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    EXPECT_EQ(e.edge_kind_ids[i], faast::tag(g.edges[i].kind));
    EXPECT_LT(e.edge_kind_ids[i], 10);
  }
  for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
    if (!g.node_values[i]) EXPECT_EQ(e.node_value_ids[i], kUnk);
  }
}

TEST(Encode, MaxLabelIsOne) {
  auto g = graph_of("class A {}", 500);
  std::vector<faast::FaAstGraph> corpus{g};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus));
  EXPECT_DOUBLE_EQ(*encode(g, v, Normalizer{100, 500}).target, 1.0);
}

TEST(Encode, MissingLabel) {
  auto g = graph_of("class A {}");
  std::vector<faast::FaAstGraph> corpus{g};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(corpus));
  EXPECT_THROW(encode(g, v, Normalizer{}), MissingLabel);
  EXPECT_FALSE(encode(g, v, Normalizer{}, EncodeMode::Inference).target);
}

TEST(Encode, OutOfVocabularyTokensAreIndistinguishable) {
  std::vector<faast::FaAstGraph> train{graph_of("class A { void m() { known(); } }")};
  auto v = build_vocabulary(std::span<const faast::FaAstGraph>(train));
  auto a = encode(graph_of("class A { void m() { foo(); } }", 1), v, Normalizer{0, 2});
  auto b = encode(graph_of("class A { void m() { bar(); } }", 1), v, Normalizer{0, 2});
  auto c = encode(graph_of("class A { void m() { known(); } }", 1), v, Normalizer{0, 2});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}
