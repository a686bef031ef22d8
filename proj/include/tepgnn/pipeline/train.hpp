#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tepgnn/gnn/model.hpp"
#include "tepgnn/pipeline/dataset.hpp"

namespace tepgnn::pipeline {

class EmptyTestSet : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class ConstantInput : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class UnknownProject : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TrainConfig {
  gnn::ModelKind model = gnn::ModelKind::GraphConv;
  std::size_t hidden_dim = 64;
  std::size_t epochs = 100;
  double lr = 0.001;
  std::size_t batch_size = 32;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  std::size_t ggnn_steps = 4;
  /// Samples faster than this are left out of training.
  double min_ms = 0.0;
  /// Tokens seen in fewer training files than this share the UNK embedding,
  /// so UNK is trained on the one-off identifiers it stands for at test time.
  std::size_t min_token_files = 2;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
/// Starts from `base` and overrides the keys present in `j`.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

struct TrainResult {
  gnn::Model model;
  std::vector<double> epoch_loss;  // mean normalized MSE per epoch, training mode
};

/// Fits vocabulary and normalization on `train_set` only, then runs
/// mini-batch Adam on the MSE loss.
/// `on_epoch`, when set, runs after every epoch with the epoch index, its
/// mean loss and the current model.
using EpochHook = std::function<void(std::size_t epoch, double loss, const gnn::Model& model)>;
TrainResult train(std::span<const Sample> train_set, const TrainConfig& config, const EpochHook& on_epoch = {});

struct Metrics {
  /// Missing when either side is constant, where correlation is undefined.
  std::optional<double> pearson;
  double mse_normalized = 0.0;
  double mse_ms = 0.0;
  std::size_t n_test = 0;
};

nlohmann::json to_json(const Metrics& m);

struct Evaluation {
  Metrics metrics;
  std::vector<std::pair<double, double>> pairs;  // (actual_ms, predicted_ms) per sample
};

Evaluation evaluate(const gnn::Model& model, std::span<const Sample> test_set);

/// Metrics from paired times. Pearson is taken on milliseconds; the
/// normalized MSE uses `norm` on both sides.
Metrics compute_metrics(std::span<const double> actual_ms, std::span<const double> predicted_ms,
                        const repr::Normalizer& norm);

/// Population-convention correlation. Throws ConstantInput for a constant
/// vector and std::invalid_argument for unequal or too-short inputs.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CrossEvalResult {
  std::string held_out;
  Evaluation evaluation;
  std::size_t n_train = 0;
  /// Vocabulary and label range recomputed from the training projects equal
  /// the trained model's, and no held-out sample was trained on.
  bool leakage_free = false;
};

/// Trains on every project except `held_out`, tests on `held_out`.
CrossEvalResult cross_eval(std::span<const Sample> dataset, const std::string& held_out, const TrainConfig& config);

struct ComparisonEntry {
  gnn::ModelKind kind;
  Evaluation evaluation;
};

struct Comparison {
  std::size_t n_train = 0;
  std::vector<ComparisonEntry> entries;  // graphconv then ggnn
};

/// Trains both model kinds on one shared split with the same seed.
Comparison compare_models(std::span<const Sample> dataset, const TrainConfig& config);

/// Split, train, evaluate.
struct HoldoutRun {
  TrainResult trained;
  Evaluation evaluation;
  std::vector<Sample> train_set;
  std::vector<Sample> test_set;
};
HoldoutRun run_holdout(std::span<const Sample> dataset, const TrainConfig& config);

}  // namespace tepgnn::pipeline
