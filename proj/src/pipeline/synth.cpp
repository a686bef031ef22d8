#include "tepgnn/pipeline/synth.hpp"

#include <array>
#include <cstdio>
#include <sstream>

#include "tepgnn/faast/builder.hpp"
#include "tepgnn/io.hpp"
#include "tepgnn/java/parser.hpp"
#include "tepgnn/rng.hpp"

namespace tepgnn::pipeline {

namespace {

constexpr std::array kHelpers{"prepare", "check", "send", "verify", "load", "update", "flush", "record"};
// Every integer literal is the same token so literal values carry no label signal.
constexpr int kLiteral = 5;

constexpr std::array kAsserts{"assertTrue", "assertNotNull", "assertFalse"};

enum class Piece { Call, Local, For, While, If };

struct Builder {
  Rng& rng;
  std::ostringstream body;
  ConstructCounts counts;
  int locals = 0;

  const char* helper() { return kHelpers[rng.below(kHelpers.size())]; }

  void emit(Piece p) {
    const char* ind = "        ";
    switch (p) {
      case Piece::Call:
        if (rng.below(3) == 0) {
          body << ind << kAsserts[rng.below(kAsserts.size())] << "(ready);\n";
        } else {
          body << ind << helper() << "(" << kLiteral << ");\n";
        }
        counts.statements += 1;
        counts.method_calls += 1;
        break;
      case Piece::Local:
        body << ind << "int v" << locals++ << " = " << kLiteral << ";\n";
        counts.statements += 1;
        break;
      case Piece::For:
        body << ind << "for (int i = 0; i < " << kLiteral << "; i++) {\n"
             << ind << "    " << helper() << "(i);\n"
             << ind << "}\n";
        counts.statements += 4;  // for, init declaration, block, call statement
        counts.loops += 1;
        counts.method_calls += 1;
        break;
      case Piece::While:
        body << ind << "while (count < " << kLiteral << ") {\n"
             << ind << "    count++;\n"
             << ind << "}\n";
        counts.statements += 3;  // while, block, increment statement
        counts.loops += 1;
        break;
      case Piece::If:
        body << ind << "if (count > " << kLiteral << ") {\n"
             << ind << "    " << helper() << "(count);\n"
             << ind << "}\n";
        counts.statements += 3;  // if, block, call statement
        counts.method_calls += 1;
        break;
    }
  }
};

}  // namespace

ConstructCounts count_constructs(const java::Ast& ast) {
  ConstructCounts c;
  for (const auto& n : ast.nodes) {
    if (n.kind == java::NodeKind::ForStmt || n.kind == java::NodeKind::WhileStmt) ++c.loops;
    if (java::is_statement(n.kind)) ++c.statements;
    if (n.kind == java::NodeKind::MethodCall) ++c.method_calls;
  }
  return c;
}

SynthCorpus synth_benchmark(std::size_t n_files, std::uint64_t seed, std::vector<std::string> projects,
                            SynthRule rule) {
  if (n_files < 20) throw TooSmall("the synthetic benchmark needs at least 20 files");
  if (projects.empty()) projects = {"alpha", "beta"};
  SynthCorpus corpus;
  corpus.rule = rule;
  corpus.seed = seed;
  corpus.projects = projects;
  Rng rng(derive_seed(seed, "synth"));
  for (std::size_t i = 0; i < n_files; ++i) {
    const std::string& project = projects[i % projects.size()];
    char name[32];
    std::snprintf(name, sizeof name, "Synth%04zuTest", i);

    std::vector<Piece> pieces;
    auto add = [&](Piece p, int lo, int hi) {
      for (int k = rng.between(lo, hi); k > 0; --k) pieces.push_back(p);
    };
    add(Piece::Call, 1, 5);
    add(Piece::Local, 0, 2);
    add(Piece::If, 0, 1);
    switch (rng.below(3)) {  // at most one loop per file
      case 1: pieces.push_back(Piece::For); break;
      case 2: pieces.push_back(Piece::While); break;
      default: break;
    }
    rng.shuffle(pieces);

    Builder b{rng, {}, {}, 0};
    b.counts.statements = 1;  // the method body block
    for (auto p : pieces) b.emit(p);

    std::ostringstream src;
    src << "package synth." << project << ";\n\n"
        << "import org.junit.Test;\n\n"
        << "public class " << name << " {\n"
        << "    private int count = " << kLiteral << ";\n"
        << "    private boolean ready = true;\n\n"
        << "    @Test\n"
        << "    public void run" << name << "() {\n"
        << b.body.str() << "    }\n"
        << "}\n";

    SynthFile f;
    f.project = project;
    f.relative_path = project + "/src/test/java/synth/" + project + "/" + name + ".java";
    f.source = src.str();
    f.counts = b.counts;
    f.noise_ms = rng.normal(0.0, rule.noise_sigma);
    f.label_ms = rule.per_loop * static_cast<double>(f.counts.loops) +
                 rule.per_statement * static_cast<double>(f.counts.statements) +
                 rule.per_call * static_cast<double>(f.counts.method_calls) + f.noise_ms;
    corpus.files.push_back(std::move(f));
  }
  return corpus;
}

std::vector<ManifestRow> SynthCorpus::manifest() const {
  std::vector<ManifestRow> rows;
  for (const auto& f : files) {
    ManifestRow r;
    r.source_path = f.relative_path;
    r.project = f.project;
    r.execution_time_ms = f.label_ms;
    r.extra = {{"loops", f.counts.loops},
               {"statements", f.counts.statements},
               {"method_calls", f.counts.method_calls},
               {"noise_ms", f.noise_ms}};
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json SynthCorpus::generator_info() const {
  return {{"label_rule", "per_loop*loops + per_statement*statements + per_call*method_calls + N(0, noise_sigma)"},
          {"per_loop", rule.per_loop},
          {"per_statement", rule.per_statement},
          {"per_call", rule.per_call},
          {"noise_sigma", rule.noise_sigma},
          {"loops", "for and while statements"},
          {"statements", "AST nodes of statement kind, blocks included"},
          {"method_calls", "method call expressions"},
          {"seed", seed},
          {"n_files", files.size()},
          {"projects", projects}};
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& out_dir) {
  for (const auto& f : corpus.files) io::write_file(out_dir / f.relative_path, f.source);
  auto rows = corpus.manifest();
  write_manifest(out_dir / "manifest.jsonl", rows);
  io::write_file(out_dir / "generator.json", corpus.generator_info().dump(2) + "\n");
}

std::vector<Sample> corpus_samples(const SynthCorpus& corpus) {
  std::vector<Sample> out;
  auto rows = corpus.manifest();
  for (std::size_t i = 0; i < corpus.files.size(); ++i) {
    const auto& f = corpus.files[i];
    Sample s;
    s.graph = faast::build_fa_ast(java::parse_source(f.source, f.relative_path));
    s.graph.label_ms = f.label_ms;
    s.project = f.project;
    s.execution_time_ms = f.label_ms;
    s.row = rows[i];
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tepgnn::pipeline
