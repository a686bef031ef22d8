#pragma once

#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "tepgnn/faast/graph.hpp"

namespace tepgnn::faast {

struct ProjectGraph {
  std::string project;
  const FaAstGraph* graph = nullptr;
};

struct ControlFlowCounts {
  std::size_t if_stmts = 0;
  std::size_t while_loops = 0;
  std::size_t for_loops = 0;
  std::size_t blocks = 0;

  std::size_t total() const { return if_stmts + while_loops + for_loops + blocks; }
  ControlFlowCounts& operator+=(const ControlFlowCounts& o);
  friend bool operator==(const ControlFlowCounts&, const ControlFlowCounts&) = default;
};

// Occurrences of control-flow nodes per project, plus a corpus total.
struct ControlFlowTable {
  std::map<std::string, ControlFlowCounts> per_project;
  ControlFlowCounts totals;
};

ControlFlowTable control_flow_stats(std::span<const ProjectGraph> graphs);

// Per-project corpus overview: files, nodes and distinct node labels (the
// token value for terminals with a value, the kind name otherwise).
struct ProjectSummary {
  std::size_t files = 0;
  std::size_t nodes = 0;
  std::size_t vocabulary = 0;
  std::size_t labelled = 0;
};

struct CorpusSummary {
  std::map<std::string, ProjectSummary> per_project;
  ProjectSummary totals;
};

CorpusSummary corpus_summary(std::span<const ProjectGraph> graphs);

nlohmann::json to_json(const ControlFlowTable& t);
nlohmann::json to_json(const CorpusSummary& s);
std::string format_tables(const CorpusSummary& s, const ControlFlowTable& t);

}  // namespace tepgnn::faast
