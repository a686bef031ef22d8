#include <gtest/gtest.h>

#include <regex>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/faast/stats.hpp"
#include "test_support.hpp"

using namespace tepgnn::faast;

namespace {

// Independent tally straight from source text: keyword occurrences and
// opening braces that start a code block (every `{` except class bodies and
// array initializers, which the fixtures below avoid).
ControlFlowCounts grep_count(const std::string& src) {
  auto count = [&](const std::string& pattern) {
    std::regex re(pattern);
    return static_cast<std::size_t>(
        std::distance(std::sregex_iterator(src.begin(), src.end(), re), std::sregex_iterator()));
  };
  ControlFlowCounts c;
  c.if_stmts = count(R"(\bif\s*\()");
  c.while_loops = count(R"(\bwhile\s*\()");
  c.for_loops = count(R"(\bfor\s*\()");
  c.blocks = count(R"(\{)") - count(R"(\bclass\b)");
  return c;
}

}  // namespace

TEST(ControlFlowStats, EmptyCorpus) {
  auto t = control_flow_stats({});
  EXPECT_TRUE(t.per_project.empty());
  EXPECT_EQ(t.totals, ControlFlowCounts{});
  EXPECT_EQ(t.totals.total(), 0u);
}

TEST(ControlFlowStats, SyntheticCorpusMatchesTextTally) {
  const std::vector<std::pair<std::string, std::string>> files = {
      {"alpha", "class A { void t() { for (int i = 0; i < 3; i++) { if (i > 1) { x(); } } } }"},
      {"alpha", "class B { void t() { while (go()) { step(); } if (a) b(); else { c(); } } }"},
      {"beta", "class C { void t() { for (String s : xs) { while (s.isEmpty()) { s = n(); } } } "
               "void u() { if (p) { if (q) { r(); } } } }"},
  };
  std::vector<FaAstGraph> graphs;
  std::map<std::string, ControlFlowCounts> expected;
  ControlFlowCounts expected_total;
  for (const auto& [project, src] : files) {
    graphs.push_back(build_fa_ast(tepgnn::java::parse_source(src, project + ".java")));
    ControlFlowCounts c = grep_count(src);
    expected[project] += c;
    expected_total += c;
  }
  std::vector<ProjectGraph> pgs;
  for (std::size_t i = 0; i < files.size(); ++i) pgs.push_back({files[i].first, &graphs[i]});
  auto t = control_flow_stats(pgs);
  EXPECT_EQ(t.per_project, expected);
  EXPECT_EQ(t.totals, expected_total);
  EXPECT_EQ(t.per_project["alpha"].for_loops, 1u);
  EXPECT_EQ(t.per_project["beta"].if_stmts, 2u);
}

TEST(CorpusSummary, CountsFilesNodesAndVocabulary) {
  auto g1 = build_fa_ast(tepgnn::java::parse_source("class A { int a; }", "A.java"));
  auto g2 = build_fa_ast(tepgnn::java::parse_source("class B { int a; }", "B.java"));
  std::vector<ProjectGraph> pgs = {{"p", &g1}, {"p", &g2}};
  auto s = corpus_summary(pgs);
  EXPECT_EQ(s.totals.files, 2u);
  EXPECT_EQ(s.totals.nodes, g1.num_nodes + g2.num_nodes);
  // CompilationUnit, ClassDecl, FieldDecl, A, B, int, a
  EXPECT_EQ(s.totals.vocabulary, 7u);
  EXPECT_FALSE(format_tables(s, control_flow_stats(pgs)).empty());
}
