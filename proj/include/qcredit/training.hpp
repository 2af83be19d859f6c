#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcredit/data.hpp"
#include "qcredit/model.hpp"

namespace qcredit {

// Table I defaults: 350 epochs, batch 16, lr 0.001, dropout 0.1, plain SGD.
struct TrainConfig {
    int epochs = 350;
    std::size_t batch_size = 16;
    double lr = 0.001;
    double dropout = 0.1;
    std::uint64_t seed = 1;
    ModelKind model_kind = ModelKind::FH;
    AnsatzConfig ansatz;
    int threads = 1;  // runtime knob only; reported numbers are thread-count invariant

    void validate() const;
};

enum class Split { TRAIN, VALIDATION, TEST };

struct Evaluation {
    double loss = 0.0;
    double auc = 0.0;
};

// Per-run record: per-epoch curves, best-validation checkpoint bookkeeping and
// the single test evaluation of the frozen best model.
struct RunReport {
    TrainConfig config;
    std::uint64_t seed = 0;

    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> train_auc;
    std::vector<double> val_auc;
    std::vector<double> epoch_seconds;  // training pass only
    std::vector<double> step_seconds;   // per-epoch mean seconds per SGD step

    double best_val_auc = 0.0;
    int best_epoch = -1;
    double test_loss = 0.0;
    double test_auc = 0.0;

    std::size_t dataset_rows = 0;
    std::size_t n_train = 0, n_val = 0, n_test = 0;
};

struct TrainResult {
    RunReport report;
    HybridModel best_model;
    std::vector<double> test_scores;  // best-model scores, test split order
    std::vector<double> test_labels;
};

// Mini-batch SGD over the train split with seeded shuffles, per-epoch
// EVAL-mode train/validation metrics and best-validation-AUC checkpointing.
// The dataset must be split and standardized.
TrainResult train(const TrainConfig& config, const Dataset& dataset);

Evaluation evaluate(const HybridModel& model, const Dataset& dataset, Split split,
                    int threads = 1);

// EVAL-mode probabilities for the given rows
std::vector<double> model_scores(const HybridModel& model, const Dataset& dataset,
                                 const std::vector<std::size_t>& rows, int threads = 1);

struct RepeatResult {
    std::vector<RunReport> reports;
    double mean_test_auc = 0.0;
    double std_test_auc = 0.0;  // population standard deviation
};

// n_runs trainings with seeds derived from config.seed; per_run (optional) is
// invoked after each run so partial results survive an aborted aggregate.
RepeatResult repeat_runs(const TrainConfig& config, const Dataset& dataset, int n_runs,
                         const std::function<void(int, const TrainResult&)>& per_run = {});

// Full JSON record (config echo, curves, timings, parameter counts).
std::string report_to_json(const RunReport& report);
// Deterministic payload: the full record minus wall-clock timings; two runs
// with the same config and seed produce byte-identical signatures.
std::string report_signature(const RunReport& report);
// epoch,train_loss,val_loss,train_auc,val_auc,epoch_seconds,step_seconds
std::string report_curves_csv(const RunReport& report);

}  // namespace qcredit
