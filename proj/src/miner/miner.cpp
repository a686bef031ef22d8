#include "tepgnn/miner/miner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <optional>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tepgnn/io.hpp"

namespace tepgnn::miner {

namespace fs = std::filesystem;

namespace {

// Surefire writes times like "1.234" and, in some versions, "1,234.5".
double parse_seconds(const XmlElement& el, const std::string& key) {
  std::string text;
  for (char c : el.attrs.at(key)) {
    if (c != ',') text += c;
  }
  double v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !(v >= 0)) {
    throw MalformedReport("bad " + key + "=\"" + el.attrs.at(key) + "\" on <" + el.name + ">",
                          el.attr_offsets.at(key));
  }
  return v;
}

// Per-class totals kept in first-appearance order.
struct Tally {
  std::vector<std::string> order;
  std::map<std::string, double> total;

  void add(const std::string& cls, double t) {
    auto [it, fresh] = total.emplace(cls, 0.0);
    if (fresh) order.push_back(cls);
    it->second += t;
  }
};

}  // namespace

std::vector<TestReportEntry> parse_surefire_xml(std::string_view xml, const std::string& run_id) {
  Tally tally;
  struct Suite {
    std::optional<std::pair<std::string, double>> own;
    Tally cases;
  };
  std::vector<Suite> suites;
  Tally loose;  // testcases outside any testsuite

  XmlHandler h;
  h.open = [&](const XmlElement& el) {
    if (el.name == "testsuite") {
      Suite s;
      if (el.attrs.contains("name") && el.attrs.contains("time")) {
        s.own.emplace(el.attrs.at("name"), parse_seconds(el, "time"));
      }
      suites.push_back(std::move(s));
    } else if (el.name == "testcase") {
      if (!el.attrs.contains("classname")) throw MalformedReport("<testcase> without classname", el.offset);
      double t = el.attrs.contains("time") ? parse_seconds(el, "time") : 0.0;
      (suites.empty() ? loose : suites.back().cases).add(el.attrs.at("classname"), t);
    }
  };
  h.close = [&](std::string_view name) {
    if (name != "testsuite") return;
    Suite s = std::move(suites.back());
    suites.pop_back();
    if (s.own) {
      tally.add(s.own->first, s.own->second);
    } else {
      for (const auto& cls : s.cases.order) tally.add(cls, s.cases.total.at(cls));
    }
  };
  scan_xml(xml, h);
  for (const auto& cls : loose.order) tally.add(cls, loose.total.at(cls));

  std::vector<TestReportEntry> out;
  for (const auto& cls : tally.order) out.push_back({cls, tally.total.at(cls), run_id});
  return out;
}

std::vector<TestReportEntry> aggregate_runs(const std::vector<TestReportEntry>& entries) {
  struct Acc {
    double sum = 0;
    std::size_t n = 0;
    std::vector<std::string> runs;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Acc> acc;
  for (const auto& e : entries) {
    auto [it, fresh] = acc.try_emplace(e.class_name);
    if (fresh) order.push_back(e.class_name);
    it->second.sum += e.time_s;
    ++it->second.n;
    if (std::find(it->second.runs.begin(), it->second.runs.end(), e.run_id) == it->second.runs.end()) {
      it->second.runs.push_back(e.run_id);
    }
  }
  std::vector<TestReportEntry> out;
  for (const auto& cls : order) {
    const Acc& a = acc.at(cls);
    std::string run = a.runs.front();
    for (std::size_t i = 1; i < a.runs.size(); ++i) run += "+" + a.runs[i];
    out.push_back({cls, a.n == 1 ? a.sum : a.sum / static_cast<double>(a.n), run});
  }
  return out;
}

std::vector<TestReportEntry> read_reports(const fs::path& reports_dir, unsigned jobs) {
  if (!fs::is_directory(reports_dir)) throw std::runtime_error("not a directory: " + reports_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(reports_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".xml") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::vector<TestReportEntry>> parsed(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      std::string run = files[i].parent_path().lexically_relative(reports_dir).generic_string();
      if (run.empty()) run = ".";
      try {
        parsed[i] = parse_surefire_xml(io::read_file(files[i]), run);
      } catch (const std::exception& e) {
        errors[i] = files[i].string() + ": " + e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < std::max(jobs, 1u); ++t) pool.emplace_back(worker);
    worker();
  }
  std::vector<TestReportEntry> out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
    out.insert(out.end(), parsed[i].begin(), parsed[i].end());
  }
  return out;
}

PairResult pair_with_sources(const std::vector<TestReportEntry>& entries, const fs::path& repo_root,
                             const PairOptions& options) {
  const fs::path root = fs::absolute(repo_root).lexically_normal();
  std::vector<fs::path> source_dirs;
  if (fs::is_directory(root)) {
    auto matches = [&](const fs::path& dir) {
      std::string rel = dir.lexically_relative(root).generic_string();
      for (const auto& r : options.roots) {
        if (rel == r || (rel.size() > r.size() && rel.ends_with("/" + r))) return true;
      }
      return false;
    };
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_directory() && matches(e.path())) source_dirs.push_back(e.path());
    }
  }
  if (source_dirs.empty()) throw NoSourceRoots("no source root below " + root.string());
  std::sort(source_dirs.begin(), source_dirs.end());

  std::string project = options.project;
  if (project.empty()) project = root.filename().string();

  // Nested classes (`a.B$Inner`) live in their top-level class's file; their
  // times add to it.
  std::vector<TestReportEntry> merged;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& e : entries) {
    std::string top = e.class_name.substr(0, e.class_name.find('$'));
    auto [it, fresh] = index.try_emplace(top, merged.size());
    if (fresh) {
      merged.push_back({top, e.time_s, e.run_id});
    } else {
      merged[it->second].time_s += e.time_s;
    }
  }

  PairResult res;
  for (const auto& e : merged) {
    std::string rel = e.class_name;
    std::replace(rel.begin(), rel.end(), '.', '/');
    rel += ".java";
    std::optional<fs::path> hit;
    for (const auto& dir : source_dirs) {
      if (fs::is_regular_file(dir / rel)) {
        hit = dir / rel;
        break;
      }
    }
    if (!hit) {
      res.unmatched.push_back(e.class_name);
      continue;
    }
    pipeline::ManifestRow row;
    row.source_path = hit->string();
    row.project = project;
    row.execution_time_ms = e.time_s * 1000.0;
    row.extra["class_name"] = e.class_name;
    row.extra["run_id"] = e.run_id;
    if (row.execution_time_ms < kPrecisionMs) row.extra["below_precision"] = true;
    res.rows.push_back(std::move(row));
  }
  return res;
}

std::string unmatched_json(const PairResult& result) {
  return nlohmann::json{{"unmatched", result.unmatched}}.dump(2) + "\n";
}

}  // namespace tepgnn::miner
