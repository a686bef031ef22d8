#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tepgnn/miner/xml.hpp"
#include "tepgnn/pipeline/dataset.hpp"

namespace tepgnn::miner {

class NoSourceRoots : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestReportEntry {
  std::string class_name;  // fully qualified
  double time_s = 0.0;
  std::string run_id;

  bool operator==(const TestReportEntry&) const = default;
};

/// One entry per test class, in first-appearance order. A `testsuite` with
/// `name` and `time` gives its class directly; otherwise its `testcase`
/// times are summed per `classname`.
std::vector<TestReportEntry> parse_surefire_xml(std::string_view xml, const std::string& run_id = "");

/// Arithmetic mean per class, first-appearance order. The run id is kept
/// when a class has a single distinct one, else the distinct ids are joined
/// with '+'. Idempotent.
std::vector<TestReportEntry> aggregate_runs(const std::vector<TestReportEntry>& entries);

/// Reads every *.xml below `reports_dir` (sorted by path). The run id of a
/// file is its parent directory relative to `reports_dir` ("." at top level),
/// so `run1/TEST-a.B.xml` and `run2/TEST-a.B.xml` are two runs. Errors name
/// the file.
std::vector<TestReportEntry> read_reports(const std::filesystem::path& reports_dir, unsigned jobs = 1);

struct PairOptions {
  std::vector<std::string> roots{"src/test/java"};  // matched at any depth below the repo
  std::string project;                              // defaults to the repo directory name
};

struct PairResult {
  std::vector<pipeline::ManifestRow> rows;
  std::vector<std::string> unmatched;
};

/// Times below this are under report precision and get `"below_precision": true`.
inline constexpr double kPrecisionMs = 1.0;

/// Resolves `a.b.C` to `<dir>/a/b/C.java` under every directory matching a
/// source root, first match in sorted order. `a.b.C$Inner` times are added
/// to `a.b.C` first. Rows
/// carry absolute paths and times in ms. Unmatched classes are listed, not
/// fatal. Throws NoSourceRoots when no directory matches any root.
PairResult pair_with_sources(const std::vector<TestReportEntry>& entries, const std::filesystem::path& repo_root,
                             const PairOptions& options = {});

std::string unmatched_json(const PairResult& result);

}  // namespace tepgnn::miner
