#include "tepgnn/faast/stats.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace tepgnn::faast {

using java::NodeKind;

ControlFlowCounts& ControlFlowCounts::operator+=(const ControlFlowCounts& o) {
  if_stmts += o.if_stmts;
  while_loops += o.while_loops;
  for_loops += o.for_loops;
  blocks += o.blocks;
  return *this;
}

ControlFlowTable control_flow_stats(std::span<const ProjectGraph> graphs) {
  ControlFlowTable t;
  for (const ProjectGraph& pg : graphs) {
    ControlFlowCounts c;
    c.if_stmts = pg.graph->count_kind(NodeKind::IfStmt);
    c.while_loops = pg.graph->count_kind(NodeKind::WhileStmt);
    c.for_loops = pg.graph->count_kind(NodeKind::ForStmt);
    c.blocks = pg.graph->count_kind(NodeKind::Block);
    t.per_project[pg.project] += c;
    t.totals += c;
  }
  return t;
}

CorpusSummary corpus_summary(std::span<const ProjectGraph> graphs) {
  CorpusSummary s;
  std::map<std::string, std::set<std::string>> labels;
  std::set<std::string> all_labels;
  for (const ProjectGraph& pg : graphs) {
    ProjectSummary& p = s.per_project[pg.project];
    ++p.files;
    p.nodes += pg.graph->num_nodes;
    if (pg.graph->label_ms) ++p.labelled;
    for (std::uint32_t v = 0; v < pg.graph->num_nodes; ++v) {
      const auto& value = pg.graph->node_values[v];
      std::string label = value ? *value : std::string(java::to_string(pg.graph->node_kinds[v]));
      labels[pg.project].insert(label);
      all_labels.insert(std::move(label));
    }
  }
  for (auto& [name, p] : s.per_project) {
    p.vocabulary = labels[name].size();
    s.totals.files += p.files;
    s.totals.nodes += p.nodes;
    s.totals.labelled += p.labelled;
  }
  s.totals.vocabulary = all_labels.size();
  return s;
}

namespace {
nlohmann::json counts_json(const ControlFlowCounts& c) {
  return {{"if", c.if_stmts},     {"while", c.while_loops}, {"for", c.for_loops},
          {"block", c.blocks},    {"total", c.total()}};
}
nlohmann::json summary_json(const ProjectSummary& p) {
  return {{"test_files", p.files}, {"nodes", p.nodes}, {"vocabulary", p.vocabulary},
          {"labelled", p.labelled}};
}
}  // namespace

nlohmann::json to_json(const ControlFlowTable& t) {
  nlohmann::json j;
  for (const auto& [name, c] : t.per_project) j["projects"][name] = counts_json(c);
  j["totals"] = counts_json(t.totals);
  return j;
}

nlohmann::json to_json(const CorpusSummary& s) {
  nlohmann::json j;
  for (const auto& [name, p] : s.per_project) j["projects"][name] = summary_json(p);
  j["totals"] = summary_json(s.totals);
  return j;
}

std::string format_tables(const CorpusSummary& s, const ControlFlowTable& t) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "Project" << std::right << std::setw(12) << "Test files"
      << std::setw(12) << "Nodes" << std::setw(12) << "Vocabulary" << '\n';
  auto row = [&](const std::string& name, const ProjectSummary& p) {
    out << std::left << std::setw(16) << name << std::right << std::setw(12) << p.files
        << std::setw(12) << p.nodes << std::setw(12) << p.vocabulary << '\n';
  };
  for (const auto& [name, p] : s.per_project) row(name, p);
  row("Total", s.totals);

  out << '\n' << std::left << std::setw(16) << "Control flow";
  for (const auto& [name, c] : t.per_project) out << std::right << std::setw(12) << name;
  out << std::setw(12) << "All" << '\n';
  auto line = [&](const char* label, auto field) {
    out << std::left << std::setw(16) << label;
    for (const auto& [name, c] : t.per_project) out << std::right << std::setw(12) << field(c);
    out << std::setw(12) << field(t.totals) << '\n';
  };
  line("If", [](const ControlFlowCounts& c) { return c.if_stmts; });
  line("While", [](const ControlFlowCounts& c) { return c.while_loops; });
  line("For", [](const ControlFlowCounts& c) { return c.for_loops; });
  line("Block", [](const ControlFlowCounts& c) { return c.blocks; });
  line("Total", [](const ControlFlowCounts& c) { return c.total(); });
  return out.str();
}

}  // namespace tepgnn::faast
