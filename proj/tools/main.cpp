#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcredit/data.hpp"
#include "qcredit/experiments.hpp"
#include "qcredit/metrics.hpp"
#include "qcredit/parallel.hpp"
#include "qcredit/training.hpp"

namespace {

using namespace qcredit;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    file << content;
    if (!file) throw std::runtime_error("write failed for " + path);
}

std::string scores_csv(const std::vector<double>& scores, const std::vector<double>& labels) {
    std::ostringstream out;
    out.precision(17);
    out << "index,score,label\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out << i << ',' << scores[i] << ',' << static_cast<int>(labels[i]) << '\n';
    }
    return out.str();
}

// flat key=value config file; values fill in only where no flag was given,
// so precedence stays flags > file > defaults
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file " + path);
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
        if (opt->count() == 0) {
            opt->add_result(value);
            opt->run_callback();
        }
    }
}

// flags that diverge from the Table I defaults get echoed on stdout so runs
// are self-describing
void echo_divergences(const TrainConfig& config) {
    const TrainConfig defaults;
    std::ostringstream out;
    if (config.epochs != defaults.epochs) out << " epochs=" << config.epochs;
    if (config.batch_size != defaults.batch_size) out << " batch_size=" << config.batch_size;
    if (config.lr != defaults.lr) out << " lr=" << config.lr;
    if (config.dropout != defaults.dropout) out << " dropout=" << config.dropout;
    const std::string s = out.str();
    if (!s.empty()) std::cout << "note: non-default hyperparameters:" << s << "\n";
}

struct DataOptions {
    std::string path;
    double val_frac = 0.10;
    double test_frac = 0.15;
    std::uint64_t split_seed = 42;
};

Dataset load_prepared(const DataOptions& opts) {
    Dataset dataset = load_csv(opts.path);
    split(dataset, opts.val_frac, opts.test_frac, opts.split_seed);
    fit_standardize(dataset);
    for (const auto& w : dataset.warnings) std::cerr << "warning: " << w << "\n";
    return dataset;
}

int cmd_gen_data(const std::string& out, const GeneratorSpec& spec) {
    const Dataset dataset = generate(spec);
    write_csv(dataset, out);
    std::cout << "wrote " << dataset.rows() << " rows (" << dataset.count_label(1.0)
              << " class 1, " << dataset.count_label(0.0) << " class 0) to " << out << "\n";
    return 0;
}

int cmd_train(const DataOptions& data_opts, TrainConfig config, int runs,
              const std::string& out_dir) {
    const Dataset dataset = load_prepared(data_opts);
    std::filesystem::create_directories(out_dir);
    echo_divergences(config);

    const RepeatResult result =
        repeat_runs(config, dataset, runs, [&](int run, const TrainResult& r) {
            const std::string stem = out_dir + "/run" + std::to_string(run);
            write_file(stem + "_report.json", report_to_json(r.report));
            write_file(stem + "_curves.csv", report_curves_csv(r.report));
            write_file(stem + "_test_scores.csv", scores_csv(r.test_scores, r.test_labels));
            save_checkpoint(r.best_model, r.report.seed, stem + "_checkpoint.json");
            std::cout << "run " << run << ": best val AUC " << r.report.best_val_auc
                      << " (epoch " << r.report.best_epoch << "), test AUC " << r.report.test_auc
                      << "\n";
        });

    std::ostringstream agg;
    agg.precision(17);
    agg << "runs,mean_test_auc,std_test_auc\n"
        << runs << ',' << result.mean_test_auc << ',' << result.std_test_auc << '\n';
    write_file(out_dir + "/aggregate.csv", agg.str());
    std::cout << "mean test AUC over " << runs << " run(s): " << result.mean_test_auc
              << " (std " << result.std_test_auc << ")\n";
    return 0;
}

int cmd_sweep(const DataOptions& data_opts, SweepSpec spec) {
    const Dataset dataset = load_prepared(data_opts);
    const SweepResult result = run_sweep(spec, dataset);
    std::cout << sweep_matrix_csv(spec, result);
    if (!spec.out_dir.empty()) std::cout << "wrote " << spec.out_dir << "/matrix.csv\n";
    return 0;
}

int cmd_bench(const BenchSpec& spec, const std::string& out_dir) {
    const BenchResult result = run_bench(spec);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(out_dir + "/bench.csv", bench_csv(spec, result));
        write_file(out_dir + "/bench_raw.csv", bench_raw_csv(spec, result));
        write_file(out_dir + "/bench_summary.csv", bench_summary_csv(spec, result));
    }
    std::cout << bench_csv(spec, result) << "\n" << bench_summary_csv(spec, result);
    return 0;
}

int cmd_roc(const std::string& scores_path, const std::string& out) {
    std::ifstream file(scores_path);
    if (!file) throw std::runtime_error("cannot open " + scores_path);
    std::string line;
    if (!std::getline(file, line)) throw std::runtime_error("empty scores file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    // accept "score,label" or "index,score,label" headers
    int score_col = -1, label_col = -1, col = 0;
    std::istringstream header(line);
    for (std::string cell; std::getline(header, cell, ','); ++col) {
        if (cell == "score") score_col = col;
        if (cell == "label") label_col = col;
    }
    if (score_col < 0 || label_col < 0) {
        throw std::runtime_error("scores file must have 'score' and 'label' columns");
    }

    std::vector<double> scores, labels;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        int c = 0;
        for (std::string cell; std::getline(row, cell, ','); ++c) {
            if (c == score_col) scores.push_back(std::stod(cell));
            if (c == label_col) labels.push_back(std::stod(cell));
        }
    }
    const RocCurve curve = roc_curve(scores, labels);
    const AucScore score = auc(scores, labels);
    write_file(out, roc_csv(curve));
    std::cout << "AUC " << score.value << " over " << score.n_pos << " positives / "
              << score.n_neg << " negatives; wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcredit: hybrid quantum-classical credit classifier workbench"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic imbalanced dataset CSV");
    GeneratorSpec gen_spec;
    std::string gen_out = "data.csv";
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--pos", gen_spec.n_pos, "class-1 rows")->capture_default_str();
    gen->add_option("--neg", gen_spec.n_neg, "class-0 rows")->capture_default_str();
    gen->add_option("--signal", gen_spec.signal_strength, "latent logit signal strength")
        ->capture_default_str();
    gen->add_option("--seed", gen_spec.seed, "generator seed")->capture_default_str();

    std::string config_path;
    auto add_config_option = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "flat key=value config file (flags take precedence)");
    };
    for (CLI::App* sub : {gen}) add_config_option(sub);

    // shared data/split options
    auto add_data_options = [&](CLI::App* sub, DataOptions& opts) {
        add_config_option(sub);
        sub->add_option("--data", opts.path, "dataset CSV path");
        sub->add_option("--val-frac", opts.val_frac, "validation fraction")->capture_default_str();
        sub->add_option("--test-frac", opts.test_frac, "test fraction")->capture_default_str();
        sub->add_option("--split-seed", opts.split_seed, "split shuffle seed")
            ->capture_default_str();
    };

    // train
    auto* tr = app.add_subcommand("train", "train one model configuration");
    DataOptions train_data;
    add_data_options(tr, train_data);
    TrainConfig train_config;
    train_config.threads = default_threads();
    std::string train_model = "fh";
    std::string train_entangler = "ring";
    int train_runs = 1;
    std::string train_out = "out/train";
    tr->add_option("--model", train_model, "fh or cc")->capture_default_str();
    tr->add_option("--qubits", train_config.ansatz.n_qubits, "qubit count")
        ->capture_default_str();
    tr->add_option("--blocks", train_config.ansatz.n_blocks, "re-uploading blocks")
        ->capture_default_str();
    tr->add_option("--layers", train_config.ansatz.layers_per_block, "entangling layers per block")
        ->capture_default_str();
    tr->add_option("--entangler", train_entangler, "ring or chain")->capture_default_str();
    tr->add_option("--epochs", train_config.epochs, "training epochs")->capture_default_str();
    tr->add_option("--batch", train_config.batch_size, "mini-batch size")->capture_default_str();
    tr->add_option("--lr", train_config.lr, "SGD learning rate")->capture_default_str();
    tr->add_option("--dropout", train_config.dropout, "dropout rate")->capture_default_str();
    tr->add_option("--seed", train_config.seed, "run seed")->capture_default_str();
    tr->add_option("--runs", train_runs, "independent runs to average")->capture_default_str();
    tr->add_option("--threads", train_config.threads, "worker threads")->capture_default_str();
    tr->add_option("--out-dir", train_out, "output directory")->capture_default_str();

    // sweep
    auto* sw = app.add_subcommand("sweep", "qubit/block grid with CC baselines");
    DataOptions sweep_data;
    add_data_options(sw, sweep_data);
    SweepSpec sweep_spec;
    std::string sweep_scale = "desk";
    sweep_spec.base.epochs = 350;
    sweep_spec.jobs = default_threads();
    sweep_spec.out_dir = "out/sweep";
    sw->add_option("--scale", sweep_scale, "desk (qubits 6-12, blocks 1-4) or paper (6-18, 1-10)")
        ->capture_default_str();
    sw->add_option("--qubits", sweep_spec.qubits, "explicit qubit list")->delimiter(',');
    sw->add_option("--blocks", sweep_spec.blocks, "explicit block list")->delimiter(',');
    sw->add_option("--runs", sweep_spec.runs_per_cell, "runs per cell")->capture_default_str();
    sw->add_option("--epochs", sweep_spec.base.epochs, "FH epochs per run")
        ->capture_default_str();
    sw->add_option("--cc-epochs-short", sweep_spec.cc_epochs_short, "short CC baseline budget")
        ->capture_default_str();
    sw->add_option("--cc-epochs-long", sweep_spec.cc_epochs_long, "long CC baseline budget")
        ->capture_default_str();
    sw->add_option("--cc-qubits", sweep_spec.cc_qubits,
                   "CC surrogate width (default: first qubit value)");
    sw->add_option("--layers", sweep_spec.base.ansatz.layers_per_block,
                   "entangling layers per block")
        ->capture_default_str();
    sw->add_option("--lr", sweep_spec.base.lr, "SGD learning rate")->capture_default_str();
    sw->add_option("--batch", sweep_spec.base.batch_size, "mini-batch size")
        ->capture_default_str();
    sw->add_option("--dropout", sweep_spec.base.dropout, "dropout rate")->capture_default_str();
    sw->add_option("--seed", sweep_spec.base.seed, "master seed")->capture_default_str();
    sw->add_option("--jobs", sweep_spec.jobs, "parallel run workers")->capture_default_str();
    sw->add_option("--out-dir", sweep_spec.out_dir, "output directory")->capture_default_str();

    // bench
    auto* be = app.add_subcommand("bench", "execution-time scaling benchmark");
    BenchSpec bench_spec;
    std::string bench_out = "out/bench";
    be->add_option("--qubits", bench_spec.qubits, "qubit list")->delimiter(',');
    be->add_option("--blocks", bench_spec.blocks, "block list")->delimiter(',');
    be->add_option("--layers", bench_spec.layers_per_block, "entangling layers per block")
        ->capture_default_str();
    be->add_option("--reps", bench_spec.reps, "repetitions per cell (median kept)")
        ->capture_default_str();
    be->add_option("--batch", bench_spec.batch_size, "mini-batch size")->capture_default_str();
    be->add_option("--fit-qubits", bench_spec.fit_qubits,
                   "qubit count for the step-vs-blocks linear fit")
        ->capture_default_str();
    be->add_option("--seed", bench_spec.seed, "benchmark seed")->capture_default_str();
    be->add_option("--out-dir", bench_out, "output directory")->capture_default_str();

    // roc
    auto* roc = app.add_subcommand("roc", "ROC points CSV from a per-row score CSV");
    std::string roc_scores, roc_out = "roc.csv";
    roc->add_option("--scores", roc_scores, "score CSV (score,label columns)")->required();
    roc->add_option("--out", roc_out, "output ROC CSV")->capture_default_str();
    add_config_option(be);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) {
            for (CLI::App* sub : {gen, tr, sw, be, roc}) {
                if (sub->parsed()) apply_config_file(sub, config_path);
            }
        }
        if ((tr->parsed() && train_data.path.empty()) ||
            (sw->parsed() && sweep_data.path.empty())) {
            std::cerr << "error: --data is required (flag or config file)\n";
            return 1;
        }
        if (gen->parsed()) return cmd_gen_data(gen_out, gen_spec);
        if (tr->parsed()) {
            train_config.model_kind = model_kind_from_name(train_model);
            if (train_entangler == "chain") {
                train_config.ansatz.ring = false;
            } else if (train_entangler != "ring") {
                throw std::invalid_argument("--entangler must be ring or chain");
            }
            return cmd_train(train_data, train_config, train_runs, train_out);
        }
        if (sw->parsed()) {
            if (sw->count("--qubits") == 0) {
                sweep_spec.qubits =
                    sweep_scale == "paper" ? std::vector<int>{6, 8, 10, 12, 14, 16, 18}
                                           : std::vector<int>{6, 8, 10, 12};
            }
            if (sw->count("--blocks") == 0) {
                sweep_spec.blocks = sweep_scale == "paper"
                                        ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}
                                        : std::vector<int>{1, 2, 3, 4};
            }
            return cmd_sweep(sweep_data, sweep_spec);
        }
        if (be->parsed()) return cmd_bench(bench_spec, bench_out);
        if (roc->parsed()) return cmd_roc(roc_scores, roc_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
