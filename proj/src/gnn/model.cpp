#include "tepgnn/gnn/model.hpp"

#include "tepgnn/faast/serialize.hpp"
#include "tepgnn/io.hpp"

namespace tepgnn::gnn {

double Model::predict_ms(const faast::FaAstGraph& graph) const {
  auto enc = repr::encode(graph, vocab, norm, repr::EncodeMode::Inference);
  return norm.denormalize(predict(*net, enc));
}

nlohmann::json to_json(const NetConfig& c) {
  return {{"kind", std::string(to_string(c.kind))},
          {"hidden_dim", c.hidden_dim},
          {"num_kinds", c.num_kinds},
          {"num_values", c.num_values},
          {"conv_layers", c.conv_layers},
          {"ggnn_steps", c.ggnn_steps},
          {"seed", c.seed}};
}

NetConfig net_config_from_json(const nlohmann::json& j) {
  NetConfig c;
  auto kind = model_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw faast::FormatError("unknown model kind " + j.at("kind").dump());
  c.kind = *kind;
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.num_kinds = j.at("num_kinds").get<std::size_t>();
  c.num_values = j.at("num_values").get<std::size_t>();
  c.conv_layers = j.at("conv_layers").get<std::size_t>();
  c.ggnn_steps = j.at("ggnn_steps").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::string to_binary(const Model& m) {
  io::ByteWriter w;
  w.put_raw("TEPM");
  w.put(kModelFormatVersion);
  w.put_string(to_json(m.net->config()).dump());
  w.put_string(m.training.dump());
  w.put_string(repr::to_json(m.vocab).dump());
  w.put(m.norm.min_ms);
  w.put(m.norm.max_ms);
  auto params = m.net->parameters();
  w.put(static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    w.put_string(p->name);
    w.put(static_cast<std::uint8_t>(p->trainable));
    w.put(static_cast<std::uint32_t>(p->value.rank()));
    for (auto d : p->value.shape()) w.put(static_cast<std::uint32_t>(d));
    for (double v : p->value.values()) w.put(v);
  }
  return w.take();
}

Model model_from_binary(std::string_view bytes) {
  try {
    io::ByteReader r(bytes);
    if (r.get_raw(4) != "TEPM") throw faast::FormatError("not a model artifact (bad magic)");
    auto version = r.get<std::uint32_t>();
    if (version != kModelFormatVersion) {
      throw faast::FormatError("unsupported model format version " + std::to_string(version));
    }
    Model m;
    NetConfig config = net_config_from_json(nlohmann::json::parse(r.get_string()));
    m.training = nlohmann::json::parse(r.get_string());
    m.vocab = repr::vocabulary_from_json(nlohmann::json::parse(r.get_string()));
    m.norm.min_ms = r.get<double>();
    m.norm.max_ms = r.get<double>();
    if (config.num_kinds != m.vocab.kind_count() || config.num_values != m.vocab.value_count()) {
      throw faast::FormatError("embedded vocabulary does not match the network tables");
    }
    m.net = make_network(config);
    auto count = r.get<std::uint32_t>();
    auto params = m.net->parameters();
    if (count != params.size()) throw faast::FormatError("parameter count mismatch");
    for (std::uint32_t i = 0; i < count; ++i) {
      std::string name = r.get_string();
      bool trainable = r.get<std::uint8_t>() != 0;
      Parameter* p = m.net->find(name);
      if (!p || p->trainable != trainable) throw faast::FormatError("unexpected parameter " + name);
      auto rank = r.get<std::uint32_t>();
      std::vector<std::size_t> shape;
      for (std::uint32_t k = 0; k < rank; ++k) shape.push_back(r.get<std::uint32_t>());
      if (shape != p->value.shape()) throw faast::FormatError("shape mismatch for " + name);
      for (auto& v : p->value.values()) v = r.get<double>();
    }
    if (!r.done()) throw faast::FormatError("trailing bytes after model artifact");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw faast::FormatError(std::string("bad model metadata: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw faast::FormatError(std::string("bad model metadata: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const faast::FormatError*>(&e)) throw;
    throw faast::FormatError(e.what());
  }
}

void save_model(const Model& m, const std::filesystem::path& path) { io::write_file(path, to_binary(m)); }

Model load_model(const std::filesystem::path& path) { return model_from_binary(io::read_file(path)); }

}  // namespace tepgnn::gnn
