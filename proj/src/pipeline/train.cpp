#include "tepgnn/pipeline/train.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "tepgnn/gnn/adam.hpp"
#include "tepgnn/rng.hpp"

namespace tepgnn::pipeline {

namespace {

constexpr std::size_t kEvalBatch = 64;

std::vector<const faast::FaAstGraph*> graphs_of(std::span<const Sample> samples) {
  std::vector<const faast::FaAstGraph*> out;
  for (const auto& s : samples) out.push_back(&s.graph);
  return out;
}

std::vector<double> labels_of(std::span<const Sample> samples) {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.execution_time_ms);
  return out;
}

repr::VocabularyOptions vocab_options(const TrainConfig& c) {
  return {.cap = repr::kDefaultValueCap, .min_graphs = std::max<std::size_t>(c.min_token_files, 1)};
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden_dim < 2) throw ConfigError("hidden_dim must be at least 2");
  if (!(lr > 0) || !std::isfinite(lr)) throw ConfigError("lr must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(train_frac > 0 && train_frac < 1)) throw ConfigError("train_frac must lie in (0, 1)");
  if (!(min_ms >= 0)) throw ConfigError("min_ms must be non-negative");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"model", std::string(gnn::to_string(c.model))},
          {"hidden_dim", c.hidden_dim},
          {"epochs", c.epochs},
          {"lr", c.lr},
          {"batch_size", c.batch_size},
          {"train_frac", c.train_frac},
          {"seed", c.seed},
          {"ggnn_steps", c.ggnn_steps},
          {"min_ms", c.min_ms},
          {"min_token_files", c.min_token_files}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
  static const std::set<std::string> known{"model", "hidden_dim", "epochs", "lr", "batch_size",
                                           "train_frac", "seed", "ggnn_steps", "min_ms", "min_token_files"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (auto& [k, v] : j.items()) {
      if (!known.count(k)) throw ConfigError("unknown config key: " + k);
    }
    if (j.contains("model")) {
      auto kind = gnn::model_kind_from_string(j["model"].get<std::string>());
      if (!kind) throw ConfigError("model must be graphconv or ggnn");
      c.model = *kind;
    }
    auto count = [&](const char* key, std::size_t& dst) {
      if (!j.contains(key)) return;
      if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
        throw ConfigError(std::string(key) + " must be a non-negative integer");
      }
      dst = j[key].get<std::size_t>();
    };
    count("hidden_dim", c.hidden_dim);
    count("epochs", c.epochs);
    count("batch_size", c.batch_size);
    count("ggnn_steps", c.ggnn_steps);
    count("min_token_files", c.min_token_files);
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lr")) c.lr = j["lr"].get<double>();
    if (j.contains("train_frac")) c.train_frac = j["train_frac"].get<double>();
    if (j.contains("min_ms")) c.min_ms = j["min_ms"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

TrainResult train(std::span<const Sample> all, const TrainConfig& config, const EpochHook& on_epoch) {
  config.validate();
  std::vector<Sample> kept;
  for (const auto& s : all) {
    if (s.execution_time_ms >= config.min_ms) kept.push_back(s);
  }
  if (kept.empty()) throw TooSmall("no training samples");
  auto graphs = graphs_of(kept);
  auto labels = labels_of(kept);

  TrainResult res;
  gnn::Model& m = res.model;
  m.vocab = repr::build_vocabulary(std::span<const faast::FaAstGraph* const>(graphs), vocab_options(config));
  m.norm = repr::fit_normalizer(labels);
  gnn::NetConfig nc;
  nc.kind = config.model;
  nc.hidden_dim = config.hidden_dim;
  nc.num_kinds = m.vocab.kind_count();
  nc.num_values = m.vocab.value_count();
  nc.ggnn_steps = config.ggnn_steps;
  nc.seed = config.seed;
  m.net = gnn::make_network(nc);
  m.training = to_json(config);
  m.training["n_train"] = kept.size();

  std::vector<repr::EncodedGraph> encoded;
  for (const auto* g : graphs) encoded.push_back(repr::encode(*g, m.vocab, m.norm));

  gnn::Adam opt(m.net->trainable(), gnn::AdamConfig{.lr = config.lr});
  Rng rng(derive_seed(config.seed, "batches"));
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<const repr::EncodedGraph*> items;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        items.push_back(&encoded[order[i]]);
      }
      auto batch = gnn::make_batch(items);
      opt.zero_grad();
      gnn::Tape tape;
      gnn::Var loss = gnn::mse(m.net->forward(tape, batch, true), batch.targets);
      tape.backward(loss);
      opt.step();
      total += loss.value()[0] * static_cast<double>(items.size());
    }
    res.epoch_loss.push_back(total / static_cast<double>(order.size()));
    if (on_epoch) on_epoch(epoch, res.epoch_loss.back(), m);
  }
  return res;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: inputs differ in length");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) throw ConstantInput("pearson: correlation is undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

nlohmann::json to_json(const Metrics& m) {
  nlohmann::json j{{"mse_normalized", m.mse_normalized}, {"mse_ms", m.mse_ms}, {"n_test", m.n_test}};
  j["pearson"] = m.pearson ? nlohmann::json(*m.pearson) : nlohmann::json(nullptr);
  return j;
}

Evaluation evaluate(const gnn::Model& model, std::span<const Sample> test_set) {
  if (test_set.empty()) throw EmptyTestSet("the test set is empty");
  std::vector<repr::EncodedGraph> encoded;
  for (const auto& s : test_set) {
    encoded.push_back(repr::encode(s.graph, model.vocab, model.norm, repr::EncodeMode::Inference));
  }
  std::vector<double> predicted;
  for (std::size_t start = 0; start < encoded.size(); start += kEvalBatch) {
    std::vector<const repr::EncodedGraph*> items;
    for (std::size_t i = start; i < std::min(encoded.size(), start + kEvalBatch); ++i) items.push_back(&encoded[i]);
    auto out = gnn::predict(*model.net, gnn::make_batch(items));
    predicted.insert(predicted.end(), out.begin(), out.end());
  }
  Evaluation ev;
  std::vector<double> actual_ms, pred_ms;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    actual_ms.push_back(test_set[i].execution_time_ms);
    pred_ms.push_back(model.norm.denormalize(predicted[i]));
    ev.pairs.emplace_back(actual_ms.back(), pred_ms.back());
  }
  ev.metrics = compute_metrics(actual_ms, pred_ms, model.norm);
  return ev;
}

Metrics compute_metrics(std::span<const double> actual_ms, std::span<const double> predicted_ms,
                        const repr::Normalizer& norm) {
  if (actual_ms.empty()) throw EmptyTestSet("the test set is empty");
  if (actual_ms.size() != predicted_ms.size()) throw std::invalid_argument("metrics: inputs differ in length");
  Metrics m;
  m.n_test = actual_ms.size();
  for (std::size_t i = 0; i < m.n_test; ++i) {
    const double dn = (predicted_ms[i] - actual_ms[i]) / norm.span();
    m.mse_normalized += dn * dn;
    m.mse_ms += (predicted_ms[i] - actual_ms[i]) * (predicted_ms[i] - actual_ms[i]);
  }
  m.mse_normalized /= static_cast<double>(m.n_test);
  m.mse_ms /= static_cast<double>(m.n_test);
  if (m.n_test >= 2) {
    try {
      m.pearson = pearson(predicted_ms, actual_ms);
    } catch (const ConstantInput&) {
      m.pearson.reset();
    }
  }
  return m;
}

CrossEvalResult cross_eval(std::span<const Sample> dataset, const std::string& held_out, const TrainConfig& config) {
  std::set<std::string> projects;
  for (const auto& s : dataset) projects.insert(s.project);
  if (!projects.count(held_out)) throw UnknownProject("no samples belong to project '" + held_out + "'");
  if (projects.size() < 2) throw PipelineError("cross-evaluation needs at least two projects");
  std::vector<Sample> train_set, test_set;
  for (const auto& s : dataset) (s.project == held_out ? test_set : train_set).push_back(s);

  CrossEvalResult res;
  res.held_out = held_out;
  auto trained = train(train_set, config);
  res.n_train = trained.model.training.at("n_train").get<std::size_t>();
  res.evaluation = evaluate(trained.model, test_set);

  std::vector<Sample> used;
  for (const auto& s : train_set) {
    if (s.execution_time_ms >= config.min_ms) used.push_back(s);
  }
  auto graphs = graphs_of(used);
  auto labels = labels_of(used);
  const bool vocab_ok =
      repr::build_vocabulary(std::span<const faast::FaAstGraph* const>(graphs), vocab_options(config)) == trained.model.vocab;
  const bool norm_ok = repr::fit_normalizer(labels) == trained.model.norm;
  const bool disjoint =
      std::none_of(used.begin(), used.end(), [&](const Sample& s) { return s.project == held_out; });
  res.leakage_free = vocab_ok && norm_ok && disjoint;
  return res;
}

Comparison compare_models(std::span<const Sample> dataset, const TrainConfig& config) {
  auto [train_set, test_set] = split(dataset, config.train_frac, config.seed);
  Comparison cmp;
  cmp.n_train = train_set.size();
  for (auto kind : {gnn::ModelKind::GraphConv, gnn::ModelKind::Ggnn}) {
    TrainConfig c = config;
    c.model = kind;
    auto trained = train(train_set, c);
    cmp.entries.push_back({kind, evaluate(trained.model, test_set)});
  }
  return cmp;
}

HoldoutRun run_holdout(std::span<const Sample> dataset, const TrainConfig& config) {
  auto [train_set, test_set] = split(dataset, config.train_frac, config.seed);
  HoldoutRun run;
  run.trained = train(train_set, config);
  run.evaluation = evaluate(run.trained.model, test_set);
  run.train_set = std::move(train_set);
  run.test_set = std::move(test_set);
  return run;
}

}  // namespace tepgnn::pipeline
