#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tepgnn/faast/serialize.hpp"
#include "tepgnn/gnn/network.hpp"
#include "tepgnn/repr/encode.hpp"
#include "tepgnn/repr/vocabulary.hpp"

namespace tepgnn::gnn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Everything needed to predict on a new graph: network, vocabulary and the
/// label range used for normalization.
struct Model {
  repr::Vocabulary vocab;
  repr::Normalizer norm;
  std::unique_ptr<Network> net;
  /// Free-form training settings recorded for provenance (seed, epochs, ...).
  nlohmann::json training = nlohmann::json::object();

  double predict_ms(const faast::FaAstGraph& graph) const;
};

nlohmann::json to_json(const NetConfig& c);
NetConfig net_config_from_json(const nlohmann::json& j);

// Packed little-endian layout:
//   "TEPM" u32 version
//   str config_json; str training_json; str vocabulary_json
//   f64 min_ms; f64 max_ms
//   u32 #tensors, then per tensor:
//     str name; u8 trainable; u32 rank; u32 dims[rank]; f64 data[prod(dims)]
// where str = u32 byte length + bytes.
std::string to_binary(const Model& m);
Model model_from_binary(std::string_view bytes);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace tepgnn::gnn
