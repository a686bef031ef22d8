#pragma once

#include <string>
#include <vector>

#include "tepgnn/faast/graph.hpp"

namespace tepgnn::faast {

/// Checks a graph against the FA-AST structural rules using only what the
/// graph itself carries (the tree is recovered from AstChild edges). Returns
/// one message per violation; empty means the graph is well formed.
std::vector<std::string> check_invariants(const FaAstGraph& g);

}  // namespace tepgnn::faast
