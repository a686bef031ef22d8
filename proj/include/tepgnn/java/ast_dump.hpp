#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "tepgnn/java/ast.hpp"

namespace tepgnn::java {

/// Indented one-node-per-line rendering, e.g. `  Name "api"`.
std::string to_text(const Ast& ast);

/// Nested `{kind, value?, children:[...]}` objects. Positions are included
/// under `line`/`column` since this is a debugging aid, not a graph format.
nlohmann::json to_json(const Ast& ast);

}  // namespace tepgnn::java
