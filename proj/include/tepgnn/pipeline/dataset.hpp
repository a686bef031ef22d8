#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tepgnn/faast/graph.hpp"
#include "tepgnn/java/parser.hpp"

namespace tepgnn::pipeline {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooSmall : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

/// One manifest line: `{"source_path":..., "project":..., "execution_time_ms":...}`.
/// Extra keys are preserved in `extra` and written back unchanged.
struct ManifestRow {
  std::string source_path;
  std::string project;
  double execution_time_ms = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
/// Parses JSONL text; `origin` names the source in error messages.
std::vector<ManifestRow> parse_manifest(std::string_view text, const std::string& origin = "manifest");
void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows);
std::string format_manifest(std::span<const ManifestRow> rows);

struct Sample {
  faast::FaAstGraph graph;  // label_ms is set from the manifest
  std::string project;
  double execution_time_ms = 0.0;
  ManifestRow row;
};

struct Dataset {
  std::vector<Sample> samples;
  std::vector<java::FileFailure> failures;  // unreadable or unparseable files, skipped
};

/// Parses and graphs every row, keeping manifest order. Relative source
/// paths resolve against `base_dir`. Rows with a non-positive time are
/// reported as failures.
Dataset load_dataset(std::span<const ManifestRow> rows, const std::filesystem::path& base_dir,
                     unsigned jobs = 1);
Dataset load_dataset(const std::filesystem::path& manifest, unsigned jobs = 1);

/// Seeded uniform shuffle, then the first floor(train_frac * n) samples
/// train. Needs at least 5 samples.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double train_frac,
                                                                             std::uint64_t seed);
std::pair<std::vector<Sample>, std::vector<Sample>> split(std::span<const Sample> samples, double train_frac,
                                                          std::uint64_t seed);

}  // namespace tepgnn::pipeline
