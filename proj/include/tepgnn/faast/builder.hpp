#pragma once

#include <vector>

#include "tepgnn/faast/graph.hpp"
#include "tepgnn/java/ast.hpp"

namespace tepgnn::faast {

/// AstChild (parent -> child) and AstParent (child -> parent) edges.
std::vector<Edge> add_tree_edges(const java::Ast& ast);

/// Chains the terminals in source order.
std::vector<Edge> add_next_token_edges(const java::Ast& ast);

/// Links each child to its next sibling, for every child list.
std::vector<Edge> add_next_sibling_edges(const java::Ast& ast);

/// Links each variable occurrence to the next occurrence of the same
/// variable.
///
/// Chains live inside one method body and follow textual order. Class fields
/// head a separate chain in every method that uses them, so no edge ever
/// connects two methods. A declaration (local, parameter, catch/lambda/for
/// variable, pattern binding) always starts a fresh chain; names it shadows
/// resume their own chain once the declaring scope closes. Names with no
/// visible declaration chain from their first occurrence in the method.
std::vector<Edge> add_next_use_edges(const java::Ast& ast);

/// IfFlow/ElseFlow from condition to branches, WhileFlow/ForFlow from
/// condition to body with a NextUse back-edge, and NextStatement between
/// consecutive statements of a Block. do-while and switch get none.
std::vector<Edge> add_control_flow_edges(const java::Ast& ast);

/// Union of all passes in canonical edge order.
FaAstGraph build_fa_ast(const java::Ast& ast);

}  // namespace tepgnn::faast
