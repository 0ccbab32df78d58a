#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metrics/metrics.hpp"
#include "model/network.hpp"
#include "train/folds.hpp"

namespace sg2vec {

struct TrainConfig {
    double learning_rate = 5e-5;
    int epochs = 200;
    int batch_clips = 1;
    std::uint64_t seed = 0;
    int folds = 5;
    bool auto_class_weights = true;
    std::optional<ClassWeights> explicit_class_weights;  // overrides auto when set
    std::optional<int> early_stop_patience = 25;
    double val_fraction = 0.1;
    double grad_clip_norm = 5.0;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;       // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    ParamStore params;  // parameters at the best validation loss
    std::vector<EpochStats> curve;
    int best_epoch = 0;
    double best_val_loss = 0.0;
    ClassWeights weights;
};

using LogFn = std::function<void(const std::string&)>;

// Trains on the given clip subset (validation carve-out happens inside).
// Deterministic given (seed, dataset, configs). Throws TrainingError on a
// non-finite loss, naming the epoch and clip.
TrainResult train(const GraphDataset& data, const std::vector<int>& clip_indices, const ModelConfig& model_cfg,
                  const TrainConfig& train_cfg, const LogFn& log = nullptr);

struct EvalResult {
    MetricsReport report;
    std::vector<PredictionTrace> traces;
};

EvalResult evaluate_clips(const ParamStore& params, const ModelConfig& model_cfg, const GraphDataset& data,
                          const std::vector<int>& clip_indices, int jobs = 1);

EvalResult evaluate_all(const ParamStore& params, const ModelConfig& model_cfg, const GraphDataset& data,
                        int jobs = 1);

struct FoldOutcome {
    FoldSplit split;
    TrainResult training;
    MetricsReport test_metrics;
    MetricsReport train_metrics;
};

struct CvResult {
    std::vector<FoldOutcome> folds;
    MetricsReport pooled;  // all test traces concatenated
};

// Stratified k-fold protocol: train per fold, evaluate on the held-out fold,
// pool frame-level results. Folds may run in parallel; outputs do not depend
// on jobs.
CvResult cross_validate(const GraphDataset& data, const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                        int jobs = 1, const LogFn& log = nullptr);

}  // namespace sg2vec
