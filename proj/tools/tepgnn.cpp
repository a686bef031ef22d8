// Command-line entry point: one subcommand per pipeline stage.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/faast/serialize.hpp"
#include "tepgnn/faast/stats.hpp"
#include "tepgnn/gnn/model.hpp"
#include "tepgnn/io.hpp"
#include "tepgnn/java/ast_dump.hpp"
#include "tepgnn/java/parser.hpp"
#include "tepgnn/miner/miner.hpp"
#include "tepgnn/pipeline/dataset.hpp"
#include "tepgnn/pipeline/synth.hpp"
#include "tepgnn/pipeline/train.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tepgnn;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool json = false;
  unsigned jobs = 1;
};

// Thrown for domain failures the user can fix (bad input, empty sets).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) fn(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < std::max(jobs, 1u); ++t) pool.emplace_back(worker);
  worker();
}

std::vector<fs::path> files_with(const fs::path& dir, std::initializer_list<const char*> exts) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    for (const char* x : exts) {
      if (ext == x) out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Source paths made relative to `to_dir` when they lie below it, absolute
// otherwise.
std::vector<pipeline::ManifestRow> rebase(std::vector<pipeline::ManifestRow> rows, const fs::path& from_dir,
                                          const fs::path& to_dir) {
  const fs::path target = fs::absolute(to_dir).lexically_normal();
  for (auto& r : rows) {
    fs::path p(r.source_path);
    if (p.is_relative()) p = from_dir / p;
    p = fs::absolute(p).lexically_normal();
    fs::path rel = p.lexically_relative(target);
    bool below = !rel.empty() && *rel.begin() != "..";
    r.source_path = (below ? rel : p).generic_string();
  }
  return rows;
}

fs::path dir_of(const fs::path& file) {
  fs::path d = file.parent_path();
  return d.empty() ? fs::path(".") : d;
}

pipeline::Dataset load_or_fail(const fs::path& manifest, unsigned jobs) {
  if (!fs::exists(manifest)) throw DomainError("manifest not found: " + manifest.string());
  auto d = pipeline::load_dataset(manifest, jobs);
  for (const auto& f : d.failures) std::cerr << "skipped " << f.path << ": " << f.message << "\n";
  return d;
}

// --- training flags shared by train / cross-eval / compare ---------------

struct TrainFlags {
  std::string config_path;
  std::optional<std::string> model;
  std::optional<std::size_t> hidden_dim, epochs, batch_size, ggnn_steps;
  std::optional<double> lr, train_frac, min_ms;

  void attach(CLI::App* cmd, bool with_model) {
    cmd->add_option("--config", config_path, "JSON config; flags below override it")->check(CLI::ExistingFile);
    if (with_model) cmd->add_option("--model", model, "graphconv or ggnn");
    cmd->add_option("--hidden-dim", hidden_dim, "hidden width d");
    cmd->add_option("--epochs", epochs);
    cmd->add_option("--lr", lr, "Adam learning rate");
    cmd->add_option("--batch-size", batch_size);
    cmd->add_option("--train-frac", train_frac, "training share of the split");
    cmd->add_option("--ggnn-steps", ggnn_steps, "propagation steps of the gated net");
    cmd->add_option("--min-ms", min_ms, "leave faster samples out of training");
  }

  pipeline::TrainConfig resolve(const Globals& g) const {
    pipeline::TrainConfig c;
    if (!config_path.empty()) c = pipeline::train_config_from_json(json::parse(io::read_file(config_path)), c);
    json o = json::object();
    if (model) o["model"] = *model;
    if (hidden_dim) o["hidden_dim"] = *hidden_dim;
    if (epochs) o["epochs"] = *epochs;
    if (lr) o["lr"] = *lr;
    if (batch_size) o["batch_size"] = *batch_size;
    if (train_frac) o["train_frac"] = *train_frac;
    if (ggnn_steps) o["ggnn_steps"] = *ggnn_steps;
    if (min_ms) o["min_ms"] = *min_ms;
    if (g.seed_given) o["seed"] = g.seed;
    return pipeline::train_config_from_json(o, c);
  }
};

std::string pearson_text(const pipeline::Metrics& m) {
  if (!m.pearson) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *m.pearson);
  return buf;
}

void print_metrics(const pipeline::Metrics& m) {
  std::printf("n_test          %zu\n", m.n_test);
  std::printf("pearson         %s\n", pearson_text(m).c_str());
  std::printf("mse_normalized  %.6f\n", m.mse_normalized);
  std::printf("mse_ms          %.4f\n", m.mse_ms);
}

void write_scatter(const fs::path& path, const pipeline::Evaluation& ev,
                   std::span<const pipeline::Sample> samples) {
  std::ostringstream out;
  out << "source_path,project,actual_ms,predicted_ms\n";
  for (std::size_t i = 0; i < ev.pairs.size(); ++i) {
    out << samples[i].row.source_path << "," << samples[i].project << "," << json(ev.pairs[i].first).dump() << ","
        << json(ev.pairs[i].second).dump() << "\n";
  }
  io::write_file(path, out.str());
}

// --- subcommands ------------------------------------------------------------

int cmd_parse(const Globals& g, const fs::path& file, bool emit_ast) {
  auto res = java::parse_file(file);
  if (auto* f = std::get_if<java::FileFailure>(&res)) throw DomainError(f->path + ": " + f->message);
  const auto& ast = std::get<java::Ast>(res);
  std::map<std::string, std::size_t> kinds;
  std::size_t statements = 0;
  for (const auto& n : ast.nodes) {
    ++kinds[std::string(java::to_string(n.kind))];
    if (java::is_statement(n.kind)) ++statements;
  }
  if (g.json) {
    json j{{"source_path", ast.source_path}, {"nodes", ast.size()}, {"statements", statements}, {"kinds", kinds}};
    if (emit_ast) j["ast"] = java::to_json(ast);
    print_json(j);
    return 0;
  }
  std::printf("%s: ok, %zu nodes, %zu statements, %zu classes, %zu methods\n", ast.source_path.c_str(), ast.size(),
              statements, kinds["ClassDecl"], kinds["MethodDecl"]);
  if (emit_ast) std::cout << java::to_text(ast);
  return 0;
}

int cmd_graph(const Globals& g, const fs::path& input, const fs::path& out, const std::string& format) {
  const std::string ext = format == "binary" ? ".faag" : ".json";
  std::vector<fs::path> files;
  fs::path base;
  if (fs::is_directory(input)) {
    files = files_with(input, {".java"});
    base = input;
  } else if (fs::is_regular_file(input)) {
    files = {input};
    base = dir_of(input);
  } else {
    throw DomainError("no such file or directory: " + input.string());
  }
  std::vector<std::optional<std::array<std::size_t, faast::kEdgeKindCount>>> hist(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), g.jobs, [&](std::size_t i) {
    auto res = java::parse_file(files[i]);
    if (auto* f = std::get_if<java::FileFailure>(&res)) {
      errors[i] = f->path + ": " + f->message;
      return;
    }
    auto graph = faast::build_fa_ast(std::get<java::Ast>(res));
    fs::path rel = files[i].lexically_relative(base);
    rel.replace_extension(ext);
    faast::save_graph(graph, out / rel);
    hist[i] = graph.edge_histogram();
  });

  std::array<std::size_t, faast::kEdgeKindCount> total{};
  std::size_t ok = 0;
  json failures = json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!hist[i]) {
      std::cerr << "skipped " << errors[i] << "\n";
      failures.push_back(errors[i]);
      continue;
    }
    ++ok;
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += (*hist[i])[k];
  }
  if (g.json) {
    json h = json::object();
    for (std::size_t k = 0; k < total.size(); ++k) h[std::string(faast::to_string(faast::EdgeKind(k)))] = total[k];
    print_json({{"graphs", ok}, {"failures", failures}, {"edge_histogram", h}});
  } else {
    std::printf("%zu graphs written to %s, %zu skipped\n", ok, out.string().c_str(), files.size() - ok);
    std::size_t sum = 0;
    for (std::size_t k = 0; k < total.size(); ++k) {
      std::printf("  %-12s %zu\n", std::string(faast::to_string(faast::EdgeKind(k))).c_str(), total[k]);
      sum += total[k];
    }
    std::printf("  %-12s %zu\n", "total", sum);
  }
  return ok == 0 ? 1 : 0;
}

int cmd_stats(const Globals& g, const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DomainError("not a directory: " + dir.string());
  auto files = files_with(dir, {".json", ".faag"});
  std::vector<faast::FaAstGraph> graphs(files.size());
  parallel_for(files.size(), g.jobs, [&](std::size_t i) { graphs[i] = faast::load_graph(files[i]); });
  std::vector<faast::ProjectGraph> pgs;
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::path rel = files[i].lexically_relative(dir);
    // Top-level subdirectory names the project; loose files use the directory's own name.
    std::string project = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string()
                                                                    : fs::absolute(dir).lexically_normal().filename().string();
    pgs.push_back({project, &graphs[i]});
  }
  auto summary = faast::corpus_summary(pgs);
  auto flow = faast::control_flow_stats(pgs);
  if (g.json) {
    print_json({{"corpus", faast::to_json(summary)}, {"control_flow", faast::to_json(flow)}});
  } else {
    std::cout << faast::format_tables(summary, flow);
  }
  return 0;
}

int cmd_ingest(const Globals& g, const fs::path& reports, const fs::path& repo, const fs::path& out,
               const std::vector<std::string>& roots, const std::string& project) {
  auto entries = miner::read_reports(reports, g.jobs);
  auto means = miner::aggregate_runs(entries);
  miner::PairOptions opts;
  if (!roots.empty()) opts.roots = roots;
  opts.project = project;
  auto res = miner::pair_with_sources(means, repo, opts);
  res.rows = rebase(std::move(res.rows), ".", dir_of(out));
  pipeline::write_manifest(out, res.rows);
  const fs::path unmatched = dir_of(out) / "unmatched.json";
  io::write_file(unmatched, miner::unmatched_json(res));
  std::size_t flagged = 0;
  for (const auto& r : res.rows) flagged += r.extra.contains("below_precision");
  if (g.json) {
    print_json({{"report_entries", entries.size()},
                {"classes", means.size()},
                {"rows", res.rows.size()},
                {"below_precision", flagged},
                {"unmatched", res.unmatched}});
  } else {
    std::printf("%zu report entries, %zu classes, %zu rows written to %s\n", entries.size(), means.size(),
                res.rows.size(), out.string().c_str());
    std::printf("%zu rows below %.0f ms flagged, %zu classes unmatched (see %s)\n", flagged, miner::kPrecisionMs,
                res.unmatched.size(), unmatched.string().c_str());
  }
  return 0;
}

int cmd_synth(const Globals& g, std::size_t n, const fs::path& out, const std::vector<std::string>& projects) {
  auto corpus = pipeline::synth_benchmark(n, g.seed, projects);
  pipeline::write_corpus(corpus, out);
  if (g.json) {
    print_json(corpus.generator_info());
  } else {
    std::printf("%zu files in %zu projects written to %s (seed %llu)\n", corpus.files.size(),
                corpus.projects.size(), out.string().c_str(), static_cast<unsigned long long>(g.seed));
  }
  return 0;
}

int cmd_train(const Globals& g, const TrainFlags& flags, const fs::path& manifest, const fs::path& out,
              std::string loss_log, std::string test_manifest) {
  auto config = flags.resolve(g);
  auto data = load_or_fail(manifest, g.jobs);
  auto [train_set, test_set] = pipeline::split(data.samples, config.train_frac, config.seed);
  if (loss_log.empty()) loss_log = out.string() + ".loss.csv";
  if (test_manifest.empty()) test_manifest = out.string() + ".test.jsonl";

  std::ostringstream log;
  log << "epoch,loss\n";
  auto trained = pipeline::train(train_set, config, [&](std::size_t epoch, double loss, const gnn::Model&) {
    log << epoch + 1 << "," << json(loss).dump() << "\n";
    if (!g.json) std::printf("epoch %4zu  loss %.6f\n", epoch + 1, loss);
  });
  gnn::save_model(trained.model, out);
  io::write_file(loss_log, log.str());

  std::vector<pipeline::ManifestRow> rows;
  for (const auto& s : test_set) rows.push_back(s.row);
  pipeline::write_manifest(test_manifest, rebase(std::move(rows), dir_of(manifest), dir_of(test_manifest)));

  std::optional<pipeline::Evaluation> ev;
  if (!test_set.empty()) ev = pipeline::evaluate(trained.model, test_set);
  if (g.json) {
    json j{{"model", out.string()},
           {"n_train", train_set.size()},
           {"n_test", test_set.size()},
           {"final_loss", trained.epoch_loss.empty() ? json(nullptr) : json(trained.epoch_loss.back())},
           {"config", pipeline::to_json(config)}};
    if (ev) j["holdout"] = pipeline::to_json(ev->metrics);
    print_json(j);
  } else {
    std::printf("model written to %s (%zu train, %zu held out in %s)\n", out.string().c_str(), train_set.size(),
                test_set.size(), test_manifest.c_str());
    if (ev) print_metrics(ev->metrics);
  }
  return 0;
}

int cmd_eval(const Globals& g, const fs::path& model_path, const fs::path& manifest, std::string scatter) {
  auto model = gnn::load_model(model_path);
  auto data = load_or_fail(manifest, g.jobs);
  auto ev = pipeline::evaluate(model, data.samples);
  if (scatter.empty()) scatter = (dir_of(manifest) / manifest.stem()).string() + ".scatter.csv";
  write_scatter(scatter, ev, data.samples);
  if (g.json) {
    print_json(pipeline::to_json(ev.metrics));
  } else {
    print_metrics(ev.metrics);
    std::printf("scatter written to %s\n", scatter.c_str());
  }
  return 0;
}

int cmd_cross_eval(const Globals& g, const TrainFlags& flags, const fs::path& manifest, const std::string& held_out) {
  auto config = flags.resolve(g);
  auto data = load_or_fail(manifest, g.jobs);
  auto res = pipeline::cross_eval(data.samples, held_out, config);
  if (g.json) {
    print_json({{"held_out", res.held_out},
                {"n_train", res.n_train},
                {"leakage_free", res.leakage_free},
                {"metrics", pipeline::to_json(res.evaluation.metrics)}});
  } else {
    std::printf("held out %s, trained on %zu samples from the other projects\n", res.held_out.c_str(), res.n_train);
    print_metrics(res.evaluation.metrics);
    std::printf("leakage check   %s\n", res.leakage_free ? "clean" : "LEAK");
  }
  return res.leakage_free ? 0 : 1;
}

int cmd_compare(const Globals& g, const TrainFlags& flags, const fs::path& manifest) {
  auto config = flags.resolve(g);
  auto data = load_or_fail(manifest, g.jobs);
  auto cmp = pipeline::compare_models(data.samples, config);
  if (g.json) {
    json entries = json::array();
    for (const auto& e : cmp.entries) {
      entries.push_back({{"model", gnn::to_string(e.kind)}, {"metrics", pipeline::to_json(e.evaluation.metrics)}});
    }
    print_json({{"n_train", cmp.n_train}, {"models", entries}});
  } else {
    std::printf("shared split: %zu train, %zu test\n", cmp.n_train, cmp.entries.front().evaluation.metrics.n_test);
    std::printf("%-10s %9s %15s %12s\n", "model", "pearson", "mse_normalized", "mse_ms");
    for (const auto& e : cmp.entries) {
      std::printf("%-10s %9s %15.6f %12.4f\n", std::string(gnn::to_string(e.kind)).c_str(),
                  pearson_text(e.evaluation.metrics).c_str(), e.evaluation.metrics.mse_normalized,
                  e.evaluation.metrics.mse_ms);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test execution time prediction from Java test source with graph neural networks", "tepgnn"};
  app.set_version_flag("--version",
                       std::string("tepgnn ") + kToolVersion + "\ngraph format " +
                           std::to_string(faast::kGraphFormatVersion) + "\nmodel format " +
                           std::to_string(gnn::kModelFormatVersion));
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--jobs", g.jobs, "worker threads for file-level fan-out")->check(CLI::PositiveNumber);
  app.require_subcommand(1);
  app.fallthrough();

  auto* parse = app.add_subcommand("parse", "parse one Java file and summarize its syntax tree");
  fs::path parse_file;
  bool emit_ast = false;
  parse->add_option("file", parse_file)->required();
  parse->add_flag("--emit-ast", emit_ast, "print the tree");

  auto* graph = app.add_subcommand("graph", "build FA-AST graphs for a file or directory");
  fs::path graph_in, graph_out;
  std::string graph_format = "json";
  graph->add_option("input", graph_in, "Java file or directory")->required();
  graph->add_option("-o,--out", graph_out, "output directory")->required();
  graph->add_option("--format", graph_format)->check(CLI::IsMember({"json", "binary"}))->capture_default_str();

  auto* stats = app.add_subcommand("stats", "corpus and control-flow statistics of a graph directory");
  fs::path stats_dir;
  stats->add_option("graph_dir", stats_dir)->required();

  auto* ingest = app.add_subcommand("ingest", "turn Surefire reports and a checkout into a manifest");
  fs::path reports, repo, ingest_out;
  std::vector<std::string> roots;
  std::string ingest_project;
  ingest->add_option("--reports", reports, "directory of XML reports, one subdirectory per run")->required();
  ingest->add_option("--repo", repo, "repository checkout")->required();
  ingest->add_option("-o,--out", ingest_out, "manifest path")->required();
  ingest->add_option("--root", roots, "test source root, matched at any depth (default src/test/java)");
  ingest->add_option("--project", ingest_project, "project name (default: repository directory name)");

  auto* synth = app.add_subcommand("synth", "write the synthetic benchmark corpus");
  std::size_t synth_n = 200;
  fs::path synth_out;
  std::vector<std::string> projects;
  synth->add_option("--n", synth_n, "number of files")->capture_default_str();
  synth->add_option("-o,--out", synth_out)->required();
  synth->add_option("--projects", projects, "project names, assigned round-robin")->delimiter(',');

  auto* train = app.add_subcommand("train", "split a manifest, train on the training part, save the model");
  fs::path train_manifest, train_out;
  std::string loss_log, test_manifest;
  TrainFlags train_flags;
  train->add_option("--manifest", train_manifest)->required();
  train->add_option("-o,--out", train_out, "model artifact path")->required();
  train->add_option("--loss-log", loss_log, "per-epoch loss CSV (default <out>.loss.csv)");
  train->add_option("--test-manifest", test_manifest, "held-out rows (default <out>.test.jsonl)");
  train_flags.attach(train, true);

  auto* eval = app.add_subcommand("eval", "evaluate a saved model on a manifest");
  fs::path eval_model, eval_manifest;
  std::string scatter;
  eval->add_option("--model", eval_model)->required()->check(CLI::ExistingFile);
  eval->add_option("--manifest", eval_manifest)->required();
  eval->add_option("--scatter", scatter, "actual/predicted CSV (default <manifest>.scatter.csv)");

  auto* cross = app.add_subcommand("cross-eval", "train on all projects but one, test on that one");
  fs::path cross_manifest;
  std::string held_out;
  TrainFlags cross_flags;
  cross->add_option("--manifest", cross_manifest)->required();
  cross->add_option("--hold-out", held_out, "project to test on")->required();
  cross_flags.attach(cross, true);

  auto* compare = app.add_subcommand("compare", "train both model kinds on one shared split");
  fs::path compare_manifest;
  TrainFlags compare_flags;
  compare->add_option("--manifest", compare_manifest)->required();
  compare_flags.attach(compare, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*parse) return cmd_parse(g, parse_file, emit_ast);
    if (*graph) return cmd_graph(g, graph_in, graph_out, graph_format);
    if (*stats) return cmd_stats(g, stats_dir);
    if (*ingest) return cmd_ingest(g, reports, repo, ingest_out, roots, ingest_project);
    if (*synth) return cmd_synth(g, synth_n, synth_out, projects);
    if (*train) return cmd_train(g, train_flags, train_manifest, train_out, loss_log, test_manifest);
    if (*eval) return cmd_eval(g, eval_model, eval_manifest, scatter);
    if (*cross) return cmd_cross_eval(g, cross_flags, cross_manifest, held_out);
    if (*compare) return cmd_compare(g, compare_flags, compare_manifest);
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "error: bad configuration: " << e.what() << "\n";
    return 2;
  } catch (const pipeline::EmptyTestSet& e) {
    std::cerr << "error: EmptyTestSet: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
