#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tepgnn/java/ast.hpp"
#include "tepgnn/pipeline/dataset.hpp"

namespace tepgnn::pipeline {

/// Label rule of the synthetic corpus:
///   label_ms = per_loop * loops + per_statement * statements
///            + per_call * method_calls + N(0, noise_sigma)
/// where loops counts for and while statements, statements counts nodes of
/// statement kind (blocks included) and method_calls counts call
/// expressions.
struct SynthRule {
  double per_loop = 50.0;
  double per_statement = 5.0;
  double per_call = 10.0;
  double noise_sigma = 2.0;
};

struct ConstructCounts {
  std::size_t loops = 0;
  std::size_t statements = 0;
  std::size_t method_calls = 0;

  friend bool operator==(const ConstructCounts&, const ConstructCounts&) = default;
};

/// Counts the constructs the label rule uses in a parsed file.
ConstructCounts count_constructs(const java::Ast& ast);

struct SynthFile {
  std::string relative_path;
  std::string project;
  std::string source;
  ConstructCounts counts;  // tallied while generating, not by parsing
  double noise_ms = 0.0;
  double label_ms = 0.0;
};

struct SynthCorpus {
  SynthRule rule;
  std::uint64_t seed = 0;
  std::vector<std::string> projects;
  std::vector<SynthFile> files;

  std::vector<ManifestRow> manifest() const;
  nlohmann::json generator_info() const;
};

/// Generates `n_files` JUnit-style test classes spread round-robin over
/// `projects` (default "alpha", "beta"). Needs n_files >= 20.
SynthCorpus synth_benchmark(std::size_t n_files, std::uint64_t seed, std::vector<std::string> projects = {},
                            SynthRule rule = {});

/// Writes the sources, `manifest.jsonl` and `generator.json` under `out_dir`.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& out_dir);

/// The corpus as samples, without touching the file system.
std::vector<Sample> corpus_samples(const SynthCorpus& corpus);

}  // namespace tepgnn::pipeline
