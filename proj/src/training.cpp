#include "qcredit/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qcredit/metrics.hpp"
#include "qcredit/parallel.hpp"

namespace qcredit {

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(lr >= 0.0)) throw std::invalid_argument("TrainConfig: lr must be >= 0");
    ansatz.validate();
    DropoutLayer{dropout}.validate();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<std::size_t>& split_rows(const Dataset& dataset, Split split) {
    switch (split) {
        case Split::TRAIN: return dataset.train_idx;
        case Split::VALIDATION: return dataset.val_idx;
        case Split::TEST: return dataset.test_idx;
    }
    throw std::invalid_argument("unknown split");
}

struct SampleResult {
    double loss = 0.0;
    ModelGrads grads;
};

}  // namespace

std::vector<double> model_scores(const HybridModel& model, const Dataset& dataset,
                                 const std::vector<std::size_t>& rows, int threads) {
    std::vector<double> scores(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        Rng unused(0);  // EVAL mode draws nothing
        std::vector<double> x(dataset.row(rows[k]), dataset.row(rows[k]) + dataset.n_features);
        scores[k] = model_forward(model, x, DropoutMode::EVAL, unused).probability;
    });
    return scores;
}

Evaluation evaluate(const HybridModel& model, const Dataset& dataset, Split split, int threads) {
    const auto& rows = split_rows(dataset, split);
    if (rows.empty()) throw std::invalid_argument("evaluate: empty split");
    const std::vector<double> scores = model_scores(model, dataset, rows, threads);

    Evaluation eval;
    std::vector<double> labels(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        labels[k] = dataset.labels[rows[k]];
        eval.loss += bce_loss(scores[k], labels[k]).loss;
    }
    eval.loss /= static_cast<double>(rows.size());
    eval.auc = auc(scores, labels).value;
    return eval;
}

TrainResult train(const TrainConfig& config, const Dataset& dataset) {
    config.validate();
    if (!dataset.has_split()) throw std::invalid_argument("train: dataset must be split");
    if (!dataset.standardized) throw std::invalid_argument("train: dataset must be standardized");

    HybridModel model = HybridModel::create(config.model_kind, config.ansatz, config.dropout,
                                            derive_seed(config.seed, 100));

    TrainResult result;
    RunReport& report = result.report;
    report.config = config;
    report.seed = config.seed;
    report.dataset_rows = dataset.rows();
    report.n_train = dataset.train_idx.size();
    report.n_val = dataset.val_idx.size();
    report.n_test = dataset.test_idx.size();
    report.best_val_auc = -1.0;

    HybridModel best_model = model;
    std::vector<std::size_t> order = dataset.train_idx;
    std::vector<SampleResult> slots(config.batch_size);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        Rng shuffle_rng(derive_seed(config.seed, 200, static_cast<std::uint64_t>(epoch)));
        shuffle(order, shuffle_rng);

        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t batch_len = std::min(config.batch_size, order.size() - start);
            const std::uint64_t batch_id = n_batches;
            parallel_for(batch_len, config.threads, [&](std::size_t slot) {
                const std::size_t row = order[start + slot];
                Rng sample_rng(derive_seed(config.seed, 300, static_cast<std::uint64_t>(epoch),
                                           batch_id, slot));
                std::vector<double> x(dataset.row(row), dataset.row(row) + dataset.n_features);
                const ModelCache cache = model_forward(model, x, DropoutMode::TRAIN, sample_rng);
                const BceResult bce = bce_loss(cache.probability, dataset.labels[row]);
                slots[slot].loss = bce.loss;
                slots[slot].grads = model_backward(model, cache, bce.d_prediction);
            });

            // fixed-order reduction keeps results identical for any thread count
            ModelGrads batch_grads;
            for (std::size_t slot = 0; slot < batch_len; ++slot) {
                if (std::isnan(slots[slot].loss)) {
                    throw std::runtime_error("train: NaN loss at epoch " + std::to_string(epoch) +
                                             ", batch " + std::to_string(batch_id));
                }
                batch_grads.add(slots[slot].grads);
            }
            batch_grads.scale(1.0 / static_cast<double>(batch_len));

            model.for_each_tensor([&](const std::string& name, std::vector<double>& params) {
                const std::vector<double>* grads = batch_grads.block(name);
                if (grads != nullptr && !grads->empty()) {
                    sgd_step(params, *grads, config.lr, name);
                }
            });
            ++n_batches;
        }

        const double epoch_time = seconds_since(epoch_start);
        report.epoch_seconds.push_back(epoch_time);
        report.step_seconds.push_back(epoch_time / static_cast<double>(n_batches));

        const Evaluation train_eval = evaluate(model, dataset, Split::TRAIN, config.threads);
        const Evaluation val_eval = evaluate(model, dataset, Split::VALIDATION, config.threads);
        report.train_loss.push_back(train_eval.loss);
        report.train_auc.push_back(train_eval.auc);
        report.val_loss.push_back(val_eval.loss);
        report.val_auc.push_back(val_eval.auc);

        if (val_eval.auc > report.best_val_auc) {
            report.best_val_auc = val_eval.auc;
            report.best_epoch = epoch;
            best_model = model;
        }
    }

    const Evaluation test_eval = evaluate(best_model, dataset, Split::TEST, config.threads);
    report.test_loss = test_eval.loss;
    report.test_auc = test_eval.auc;

    result.best_model = best_model;
    result.test_scores = model_scores(best_model, dataset, dataset.test_idx, config.threads);
    result.test_labels.resize(dataset.test_idx.size());
    for (std::size_t k = 0; k < dataset.test_idx.size(); ++k) {
        result.test_labels[k] = dataset.labels[dataset.test_idx[k]];
    }
    return result;
}

RepeatResult repeat_runs(const TrainConfig& config, const Dataset& dataset, int n_runs,
                         const std::function<void(int, const TrainResult&)>& per_run) {
    if (n_runs < 1) throw std::invalid_argument("repeat_runs: n_runs must be >= 1");
    RepeatResult result;
    for (int run = 0; run < n_runs; ++run) {
        TrainConfig run_config = config;
        run_config.seed = derive_seed(config.seed, 400, static_cast<std::uint64_t>(run));
        const TrainResult run_result = train(run_config, dataset);
        result.reports.push_back(run_result.report);
        if (per_run) per_run(run, run_result);
    }
    double mean = 0.0;
    for (const auto& r : result.reports) mean += r.test_auc;
    mean /= static_cast<double>(n_runs);
    double var = 0.0;
    for (const auto& r : result.reports) {
        const double d = r.test_auc - mean;
        var += d * d;
    }
    result.mean_test_auc = mean;
    result.std_test_auc = std::sqrt(var / static_cast<double>(n_runs));
    return result;
}

namespace {

nlohmann::json config_json(const TrainConfig& config) {
    return {{"model", model_kind_name(config.model_kind)},
            {"epochs", config.epochs},
            {"batch_size", config.batch_size},
            {"lr", config.lr},
            {"dropout", config.dropout},
            {"seed", config.seed},
            {"n_qubits", config.ansatz.n_qubits},
            {"n_blocks", config.ansatz.n_blocks},
            {"layers_per_block", config.ansatz.layers_per_block},
            {"ring_entangler", config.ansatz.ring}};
}

nlohmann::json report_json(const RunReport& report, bool with_timing) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["config"] = config_json(report.config);
    j["seed"] = report.seed;
    j["dataset"] = {{"rows", report.dataset_rows},
                    {"n_train", report.n_train},
                    {"n_val", report.n_val},
                    {"n_test", report.n_test}};
    j["curves"] = {{"train_loss", report.train_loss},
                   {"val_loss", report.val_loss},
                   {"train_auc", report.train_auc},
                   {"val_auc", report.val_auc}};
    j["best"] = {{"val_auc", report.best_val_auc}, {"epoch", report.best_epoch}};
    j["test"] = {{"auc", report.test_auc}, {"loss", report.test_loss}};
    if (with_timing) {
        double total = 0.0;
        for (double s : report.epoch_seconds) total += s;
        double mean_step = 0.0;
        for (double s : report.step_seconds) mean_step += s;
        if (!report.step_seconds.empty()) {
            mean_step /= static_cast<double>(report.step_seconds.size());
        }
        j["timing"] = {{"total_train_seconds", total},
                       {"mean_epoch_seconds",
                        report.epoch_seconds.empty()
                            ? 0.0
                            : total / static_cast<double>(report.epoch_seconds.size())},
                       {"mean_step_seconds", mean_step}};
    }
    return j;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
    return report_json(report, true).dump(2) + "\n";
}

std::string report_signature(const RunReport& report) {
    return report_json(report, false).dump();
}

std::string report_curves_csv(const RunReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,train_loss,val_loss,train_auc,val_auc,epoch_seconds,step_seconds\n";
    for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
        out << e << ',' << report.train_loss[e] << ',' << report.val_loss[e] << ','
            << report.train_auc[e] << ',' << report.val_auc[e] << ',' << report.epoch_seconds[e]
            << ',' << report.step_seconds[e] << '\n';
    }
    return out.str();
}

}  // namespace qcredit
