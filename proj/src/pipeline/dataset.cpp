#include "tepgnn/pipeline/dataset.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/io.hpp"
#include "tepgnn/rng.hpp"

namespace tepgnn::pipeline {

std::vector<ManifestRow> parse_manifest(std::string_view text, const std::string& origin) {
  std::vector<ManifestRow> rows;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ManifestRow r;
      r.source_path = j.at("source_path").get<std::string>();
      r.project = j.at("project").get<std::string>();
      r.execution_time_ms = j.at("execution_time_ms").get<double>();
      for (auto& [k, v] : j.items()) {
        if (k != "source_path" && k != "project" && k != "execution_time_ms") r.extra[k] = v;
      }
      rows.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw PipelineError(origin + ":" + std::to_string(line_no) + ": bad manifest row: " + e.what());
    }
  }
  return rows;
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  return parse_manifest(io::read_file(path), path.string());
}

std::string format_manifest(std::span<const ManifestRow> rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::json j = r.extra;
    j["source_path"] = r.source_path;
    j["project"] = r.project;
    j["execution_time_ms"] = r.execution_time_ms;
    out += j.dump() + "\n";
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows) {
  io::write_file(path, format_manifest(rows));
}

Dataset load_dataset(std::span<const ManifestRow> rows, const std::filesystem::path& base_dir, unsigned jobs) {
  std::vector<std::variant<Sample, java::FileFailure>> results(rows.size(), java::FileFailure{});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const auto& row = rows[i];
      std::filesystem::path p = row.source_path;
      if (p.is_relative()) p = base_dir / p;
      if (!(row.execution_time_ms > 0) || !std::isfinite(row.execution_time_ms)) {
        results[i] = java::FileFailure{p.string(), "execution time must be positive"};
        continue;
      }
      auto parsed = java::parse_file(p);
      if (auto* fail = std::get_if<java::FileFailure>(&parsed)) {
        results[i] = *fail;
        continue;
      }
      Sample s;
      s.graph = faast::build_fa_ast(std::get<java::Ast>(parsed));
      s.graph.source_path = row.source_path;
      s.graph.label_ms = row.execution_time_ms;
      s.project = row.project;
      s.execution_time_ms = row.execution_time_ms;
      s.row = row;
      results[i] = std::move(s);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  Dataset d;
  for (auto& r : results) {
    if (auto* s = std::get_if<Sample>(&r)) {
      d.samples.push_back(std::move(*s));
    } else {
      d.failures.push_back(std::get<java::FileFailure>(r));
    }
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& manifest, unsigned jobs) {
  auto rows = read_manifest(manifest);
  return load_dataset(rows, manifest.parent_path(), jobs);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double train_frac,
                                                                             std::uint64_t seed) {
  if (n < 5) throw TooSmall("need at least 5 samples to split, got " + std::to_string(n));
  if (!(train_frac > 0 && train_frac < 1)) throw std::invalid_argument("train_frac must lie in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(order);
  // The small epsilon keeps exact products such as 0.8 * 10 from landing a
  // hair under the integer.
  auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {train, test};
}

std::pair<std::vector<Sample>, std::vector<Sample>> split(std::span<const Sample> samples, double train_frac,
                                                          std::uint64_t seed) {
  auto [tr, te] = split_indices(samples.size(), train_frac, seed);
  std::vector<Sample> train, test;
  for (auto i : tr) train.push_back(samples[i]);
  for (auto i : te) test.push_back(samples[i]);
  return {train, test};
}

}  // namespace tepgnn::pipeline
