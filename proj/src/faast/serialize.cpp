#include "tepgnn/faast/serialize.hpp"

#include <map>

#include "tepgnn/io.hpp"

namespace tepgnn::faast {

namespace {

constexpr std::string_view kMagic = "FAAG";
constexpr std::uint32_t kNoValue = 0xFFFFFFFFu;

java::NodeKind kind_or_throw(std::string_view name) {
  auto kind = java::node_kind_from_string(name);
  if (!kind) throw FormatError("unknown node kind '" + std::string(name) + "'");
  return *kind;
}

EdgeKind edge_kind_or_throw(std::uint32_t t) {
  auto kind = edge_kind_from_tag(t);
  if (!kind) throw FormatError("edge kind tag out of range: " + std::to_string(t));
  return *kind;
}

void check_edges(const FaAstGraph& g) {
  for (const Edge& e : g.edges) {
    if (e.src >= g.num_nodes || e.dst >= g.num_nodes) throw FormatError("edge endpoint out of range");
  }
}

}  // namespace

nlohmann::json to_json(const FaAstGraph& g) {
  nlohmann::json j;
  j["format_version"] = kGraphFormatVersion;
  j["num_nodes"] = g.num_nodes;
  auto& kinds = j["kinds"] = nlohmann::json::array();
  for (auto k : g.node_kinds) kinds.push_back(std::string(java::to_string(k)));
  auto& values = j["values"] = nlohmann::json::array();
  for (const auto& v : g.node_values) values.push_back(v ? nlohmann::json(*v) : nlohmann::json());
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges) edges.push_back({e.src, e.dst, tag(e.kind)});
  j["source_path"] = g.source_path;
  j["label_ms"] = g.label_ms ? nlohmann::json(*g.label_ms) : nlohmann::json();
  return j;
}

FaAstGraph graph_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<std::uint32_t>() != kGraphFormatVersion) {
      throw FormatError("unsupported graph format version");
    }
    FaAstGraph g;
    g.num_nodes = j.at("num_nodes").get<std::uint32_t>();
    for (const auto& k : j.at("kinds")) g.node_kinds.push_back(kind_or_throw(k.get<std::string>()));
    for (const auto& v : j.at("values")) {
      g.node_values.push_back(v.is_null() ? std::nullopt
                                          : std::optional<std::string>(v.get<std::string>()));
    }
    if (g.node_kinds.size() != g.num_nodes || g.node_values.size() != g.num_nodes) {
      throw FormatError("node tables do not match num_nodes");
    }
    for (const auto& e : j.at("edges")) {
      g.edges.push_back(Edge{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
                             edge_kind_or_throw(e.at(2).get<std::uint32_t>())});
    }
    check_edges(g);
    g.source_path = j.value("source_path", std::string());
    if (j.contains("label_ms") && !j["label_ms"].is_null()) g.label_ms = j["label_ms"].get<double>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed graph JSON: ") + e.what());
  }
}

std::string to_binary(const FaAstGraph& g) {
  io::ByteWriter w;
  w.put_raw(kMagic);
  w.put(static_cast<std::uint8_t>(kGraphFormatVersion));
  w.put_string(g.source_path);
  w.put(static_cast<std::uint8_t>(g.label_ms.has_value()));
  w.put(g.label_ms.value_or(0.0));
  w.put(g.num_nodes);

  // String tables in first-appearance order keep the encoding deterministic.
  std::map<java::NodeKind, std::uint32_t> kind_ids;
  std::vector<java::NodeKind> kind_table;
  std::vector<std::uint32_t> kind_index;
  for (auto k : g.node_kinds) {
    auto [it, inserted] = kind_ids.emplace(k, static_cast<std::uint32_t>(kind_table.size()));
    if (inserted) kind_table.push_back(k);
    kind_index.push_back(it->second);
  }
  w.put(static_cast<std::uint32_t>(kind_table.size()));
  for (auto k : kind_table) w.put_string(java::to_string(k));
  for (auto idx : kind_index) w.put(idx);

  std::map<std::string, std::uint32_t> value_ids;
  std::vector<const std::string*> value_table;
  std::vector<std::uint32_t> value_index;
  for (const auto& v : g.node_values) {
    if (!v) {
      value_index.push_back(kNoValue);
      continue;
    }
    auto [it, inserted] = value_ids.emplace(*v, static_cast<std::uint32_t>(value_table.size()));
    if (inserted) value_table.push_back(&it->first);
    value_index.push_back(it->second);
  }
  w.put(static_cast<std::uint32_t>(value_table.size()));
  for (const std::string* v : value_table) w.put_string(*v);
  for (auto idx : value_index) w.put(idx);

  w.put(static_cast<std::uint32_t>(g.edges.size()));
  for (const Edge& e : g.edges) {
    w.put(e.src);
    w.put(e.dst);
    w.put(tag(e.kind));
  }
  return w.take();
}

FaAstGraph graph_from_binary(std::string_view bytes) {
  try {
    io::ByteReader r(bytes);
    if (r.get_raw(kMagic.size()) != kMagic) throw FormatError("not a packed FA-AST graph");
    if (r.get<std::uint8_t>() != kGraphFormatVersion) throw FormatError("unsupported graph format version");
    FaAstGraph g;
    g.source_path = r.get_string();
    const bool has_label = r.get<std::uint8_t>() != 0;
    const double label = r.get<double>();
    if (has_label) g.label_ms = label;
    g.num_nodes = r.get<std::uint32_t>();

    std::vector<java::NodeKind> kind_table(r.get<std::uint32_t>());
    for (auto& k : kind_table) k = kind_or_throw(r.get_string());
    for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
      auto idx = r.get<std::uint32_t>();
      if (idx >= kind_table.size()) throw FormatError("kind index out of range");
      g.node_kinds.push_back(kind_table[idx]);
    }
    std::vector<std::string> value_table(r.get<std::uint32_t>());
    for (auto& v : value_table) v = r.get_string();
    for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
      auto idx = r.get<std::uint32_t>();
      if (idx == kNoValue) {
        g.node_values.emplace_back();
      } else if (idx < value_table.size()) {
        g.node_values.emplace_back(value_table[idx]);
      } else {
        throw FormatError("value index out of range");
      }
    }
    const auto num_edges = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < num_edges; ++i) {
      Edge e;
      e.src = r.get<std::uint32_t>();
      e.dst = r.get<std::uint32_t>();
      e.kind = edge_kind_or_throw(r.get<std::uint32_t>());
      g.edges.push_back(e);
    }
    if (!r.done()) throw FormatError("trailing bytes after graph");
    check_edges(g);
    return g;
  } catch (const FormatError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw FormatError(std::string("malformed packed graph: ") + e.what());
  }
}

void save_graph(const FaAstGraph& g, const std::filesystem::path& path) {
  if (path.extension() == ".faag") {
    io::write_file(path, to_binary(g));
  } else {
    io::write_file(path, to_json(g).dump() + "\n");
  }
}

FaAstGraph load_graph(const std::filesystem::path& path) {
  std::string bytes = io::read_file(path);
  if (path.extension() == ".faag") return graph_from_binary(bytes);
  try {
    return graph_from_json(nlohmann::json::parse(bytes));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace tepgnn::faast
