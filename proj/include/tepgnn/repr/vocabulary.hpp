#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tepgnn/faast/graph.hpp"

namespace tepgnn::repr {

class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kUnk = 0;
inline constexpr std::size_t kDefaultValueCap = 20000;

/// Dense integer ids for node kinds and node values.
///
/// Kind ids cover every grammar kind (sorted by name), so graphs from a test
/// split never meet an unknown kind. Value id 0 is UNK; the remaining ids are
/// the training tokens in sorted order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> kinds, std::vector<std::string> values);

  std::uint32_t kind_id(java::NodeKind kind) const;
  std::uint32_t value_id(std::string_view token) const;

  std::size_t kind_count() const { return kinds_.size(); }
  /// Includes UNK.
  std::size_t value_count() const { return values_.size(); }
  const std::vector<std::string>& kinds() const { return kinds_; }
  const std::vector<std::string>& values() const { return values_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.kinds_ == b.kinds_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> kinds_;
  std::vector<std::string> values_;
  std::vector<std::uint32_t> kind_by_enum_;
  std::unordered_map<std::string, std::uint32_t> value_lookup_;
};

struct VocabularyOptions {
  /// Keep at most this many values, the most frequent first (ties broken by
  /// token order).
  std::size_t cap = kDefaultValueCap;
  /// Values found in fewer training graphs than this map to UNK.
  std::size_t min_graphs = 1;
};

Vocabulary build_vocabulary(std::span<const faast::FaAstGraph* const> train, VocabularyOptions options = {});
Vocabulary build_vocabulary(std::span<const faast::FaAstGraph> train, VocabularyOptions options = {});

nlohmann::json to_json(const Vocabulary& v);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

}  // namespace tepgnn::repr
