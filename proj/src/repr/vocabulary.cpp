#include "tepgnn/repr/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tepgnn::repr {

namespace {
constexpr const char* kUnkToken = "<unk>";
}

Vocabulary::Vocabulary(std::vector<std::string> kinds, std::vector<std::string> values)
    : kinds_(std::move(kinds)), values_(std::move(values)) {
  if (values_.empty() || values_[0] != kUnkToken) {
    throw std::invalid_argument("value vocabulary must start with " + std::string(kUnkToken));
  }
  kind_by_enum_.assign(java::kNodeKindCount, UINT32_MAX);
  for (std::uint32_t i = 0; i < kinds_.size(); ++i) {
    auto k = java::node_kind_from_string(kinds_[i]);
    if (!k) throw std::invalid_argument("unknown node kind in vocabulary: " + kinds_[i]);
    kind_by_enum_[static_cast<std::size_t>(*k)] = i;
  }
  if (std::find(kind_by_enum_.begin(), kind_by_enum_.end(), UINT32_MAX) != kind_by_enum_.end()) {
    throw std::invalid_argument("kind vocabulary does not cover every node kind");
  }
  for (std::uint32_t i = 1; i < values_.size(); ++i) {
    if (!value_lookup_.emplace(values_[i], i).second) {
      throw std::invalid_argument("duplicate value token: " + values_[i]);
    }
  }
}

std::uint32_t Vocabulary::kind_id(java::NodeKind kind) const {
  return kind_by_enum_.at(static_cast<std::size_t>(kind));
}

std::uint32_t Vocabulary::value_id(std::string_view token) const {
  auto it = value_lookup_.find(std::string(token));
  return it == value_lookup_.end() ? kUnk : it->second;
}

Vocabulary build_vocabulary(std::span<const faast::FaAstGraph* const> train, VocabularyOptions options) {
  if (train.empty()) throw EmptyCorpus("cannot build a vocabulary from an empty training set");
  std::map<std::string, std::size_t> freq;
  std::map<std::string, std::size_t> graphs;
  for (const auto* g : train) {
    std::set<std::string_view> seen;
    for (const auto& v : g->node_values) {
      if (!v) continue;
      ++freq[*v];
      if (seen.insert(*v).second) ++graphs[*v];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : freq) {
    if (graphs[tok] >= options.min_graphs) ranked.emplace_back(tok, n);
  }
  if (ranked.size() > options.cap) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(options.cap);
    std::sort(ranked.begin(), ranked.end());
  }
  std::vector<std::string> values{kUnkToken};
  for (auto& [tok, n] : ranked) values.push_back(tok);

  std::vector<std::string> kinds;
  for (std::size_t i = 0; i < java::kNodeKindCount; ++i) {
    kinds.emplace_back(java::to_string(static_cast<java::NodeKind>(i)));
  }
  std::sort(kinds.begin(), kinds.end());
  return Vocabulary(std::move(kinds), std::move(values));
}

Vocabulary build_vocabulary(std::span<const faast::FaAstGraph> train, VocabularyOptions options) {
  std::vector<const faast::FaAstGraph*> ptrs;
  for (const auto& g : train) ptrs.push_back(&g);
  return build_vocabulary(std::span<const faast::FaAstGraph* const>(ptrs), options);
}

nlohmann::json to_json(const Vocabulary& v) {
  return {{"kinds", v.kinds()}, {"values", v.values()}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  return Vocabulary(j.at("kinds").get<std::vector<std::string>>(),
                    j.at("values").get<std::vector<std::string>>());
}

}  // namespace tepgnn::repr
