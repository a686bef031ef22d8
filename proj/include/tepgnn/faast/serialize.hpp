#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tepgnn/faast/graph.hpp"

namespace tepgnn::faast {

inline constexpr std::uint32_t kGraphFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON layout:
//   {"format_version":1, "num_nodes":N, "kinds":["ClassDecl",...],
//    "values":["api",null,...], "edges":[[src,dst,tag],...],
//    "source_path":"...", "label_ms":123.4|null}
nlohmann::json to_json(const FaAstGraph& g);
FaAstGraph graph_from_json(const nlohmann::json& j);

// Packed little-endian layout:
//   "FAAG" u8 version
//   str source_path; u8 has_label; f64 label_ms; u32 num_nodes
//   u32 #kind_names, str...; u32 kind_index[num_nodes]
//   u32 #values, str...; u32 value_index[num_nodes] (0xFFFFFFFF = none)
//   u32 #edges, (u32 src, u32 dst, u32 tag)[#edges]
// where str = u32 byte length + bytes.
std::string to_binary(const FaAstGraph& g);
FaAstGraph graph_from_binary(std::string_view bytes);

/// Writes `.json` or `.faag` (binary) depending on the extension.
void save_graph(const FaAstGraph& g, const std::filesystem::path& path);
FaAstGraph load_graph(const std::filesystem::path& path);

}  // namespace tepgnn::faast
