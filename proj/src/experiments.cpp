#include "qcredit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qcredit/metrics.hpp"
#include "qcredit/parallel.hpp"

namespace qcredit {

namespace {

using Clock = std::chrono::steady_clock;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    file << content;
    if (!file) throw std::runtime_error("write failed for " + path);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void SweepSpec::validate() const {
    if (qubits.empty() || blocks.empty()) {
        throw std::invalid_argument("SweepSpec: qubit and block ranges must be non-empty");
    }
    if (runs_per_cell < 1) throw std::invalid_argument("SweepSpec: runs_per_cell must be >= 1");
    if (cc_epochs_short < 1 || cc_epochs_long < 1) {
        throw std::invalid_argument("SweepSpec: CC epoch budgets must be >= 1");
    }
}

SweepResult run_sweep(const SweepSpec& spec, const Dataset& dataset) {
    spec.validate();
    if (!dataset.has_split() || !dataset.standardized) {
        throw std::invalid_argument("run_sweep: dataset must be split and standardized");
    }
    if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

    // one task per (cell, run); seeds depend only on the cell and run index,
    // so scheduling order cannot change any result
    struct Task {
        std::size_t cell = 0;
        int run = 0;
        TrainConfig config;
    };
    std::vector<SweepCell> cells;
    for (int q : spec.qubits) {
        for (int b : spec.blocks) {
            SweepCell cell;
            cell.kind = ModelKind::FH;
            cell.n_qubits = q;
            cell.n_blocks = b;
            cell.epochs = spec.base.epochs;
            cell.runs = spec.runs_per_cell;
            cells.push_back(cell);
        }
    }
    const int cc_qubits = spec.cc_qubits > 0 ? spec.cc_qubits : spec.qubits.front();
    for (int cc_epochs : {spec.cc_epochs_short, spec.cc_epochs_long}) {
        SweepCell cell;
        cell.kind = ModelKind::CC;
        cell.n_qubits = cc_qubits;
        cell.n_blocks = 0;
        cell.epochs = cc_epochs;
        cell.runs = spec.runs_per_cell;
        cells.push_back(cell);
    }

    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int run = 0; run < spec.runs_per_cell; ++run) {
            Task task;
            task.cell = c;
            task.run = run;
            task.config = spec.base;
            task.config.model_kind = cells[c].kind;
            task.config.epochs = cells[c].epochs;
            task.config.ansatz.n_qubits = cells[c].n_qubits;
            task.config.ansatz.n_blocks = std::max(cells[c].n_blocks, 1);
            task.config.seed =
                derive_seed(spec.base.seed, cells[c].kind == ModelKind::FH ? 1 : 2,
                            static_cast<std::uint64_t>(cells[c].n_qubits),
                            static_cast<std::uint64_t>(cells[c].n_blocks),
                            static_cast<std::uint64_t>(cells[c].epochs),
                            static_cast<std::uint64_t>(run));
            tasks.push_back(task);
        }
    }

    std::vector<RunReport> reports(tasks.size());
    std::vector<std::string> run_files(tasks.size());
    parallel_for(tasks.size(), spec.jobs, [&](std::size_t t) {
        const TrainResult result = train(tasks[t].config, dataset);
        reports[t] = result.report;
        if (!spec.out_dir.empty()) {
            const SweepCell& cell = cells[tasks[t].cell];
            std::ostringstream name;
            name << model_kind_name(cell.kind) << "_q" << cell.n_qubits << "_b" << cell.n_blocks
                 << "_e" << cell.epochs << "_run" << tasks[t].run;
            const std::string stem = spec.out_dir + "/" + name.str();
            write_file(stem + "_report.json", report_to_json(result.report));
            write_file(stem + "_curves.csv", report_curves_csv(result.report));
        }
    });

    SweepResult result;
    result.cells = cells;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        result.cells[tasks[t].cell].reports.push_back(reports[t]);
    }
    for (auto& cell : result.cells) {
        double mean = 0.0;
        for (const auto& r : cell.reports) mean += r.test_auc;
        mean /= static_cast<double>(cell.reports.size());
        double var = 0.0;
        for (const auto& r : cell.reports) {
            const double d = r.test_auc - mean;
            var += d * d;
        }
        cell.mean_test_auc = mean;
        cell.std_test_auc = std::sqrt(var / static_cast<double>(cell.reports.size()));
    }

    if (!spec.out_dir.empty()) {
        write_file(spec.out_dir + "/matrix.csv", sweep_matrix_csv(spec, result));
    }
    return result;
}

std::string sweep_matrix_csv(const SweepSpec& spec, const SweepResult& result) {
    std::ostringstream out;
    out << "# qcredit sweep matrix v1\n";
    out << "# seed=" << spec.base.seed << " runs_per_cell=" << spec.runs_per_cell
        << " epochs=" << spec.base.epochs << " cc_epochs=" << spec.cc_epochs_short << "/"
        << spec.cc_epochs_long << " batch_size=" << spec.base.batch_size
        << " lr=" << fmt(spec.base.lr) << " dropout=" << fmt(spec.base.dropout)
        << " layers_per_block=" << spec.base.ansatz.layers_per_block << "\n";
    out << "model,n_qubits,n_blocks,epochs,runs,mean_test_auc,std_test_auc\n";
    for (const auto& cell : result.cells) {
        out << model_kind_name(cell.kind) << ',' << cell.n_qubits << ',' << cell.n_blocks << ','
            << cell.epochs << ',' << cell.runs << ',' << fmt(cell.mean_test_auc) << ','
            << fmt(cell.std_test_auc) << '\n';
    }
    return out.str();
}

void BenchSpec::validate() const {
    if (qubits.empty() || blocks.empty()) {
        throw std::invalid_argument("BenchSpec: qubit and block lists must be non-empty");
    }
    if (reps < 1) throw std::invalid_argument("BenchSpec: reps must be >= 1");
    if (batch_size < 1 || batches_per_epoch < 1) {
        throw std::invalid_argument("BenchSpec: batch sizes must be >= 1");
    }
}

namespace {

// Times body() once; if the measured interval is too coarse for the clock
// (< 10 microsecond-scale ticks), reruns it with a growing inner repetition
// count and reports the per-call time.
template <typename F>
double timed_call(F&& body) {
    constexpr double min_interval = 1e-5;  // 10 ticks of a 1 us timer
    std::size_t inner = 1;
    while (true) {
        const auto start = Clock::now();
        for (std::size_t i = 0; i < inner; ++i) body();
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed >= min_interval || inner >= (std::size_t{1} << 20)) {
            return elapsed / static_cast<double>(inner);
        }
        inner *= 8;
    }
}

}  // namespace

BenchResult run_bench(const BenchSpec& spec) {
    spec.validate();
    BenchResult result;

    for (int q : spec.qubits) {
        for (int b : spec.blocks) {
            AnsatzConfig ansatz;
            ansatz.n_qubits = q;
            ansatz.n_blocks = b;
            ansatz.layers_per_block = spec.layers_per_block;

            TrainConfig config;
            config.ansatz = ansatz;
            config.model_kind = ModelKind::FH;
            config.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(q),
                                      static_cast<std::uint64_t>(b));

            HybridModel model = HybridModel::create(ModelKind::FH, ansatz, config.dropout,
                                                    derive_seed(config.seed, 100));

            // fixed random batch set, balanced labels
            Rng data_rng(derive_seed(config.seed, 5));
            const std::size_t rows = spec.batch_size * spec.batches_per_epoch;
            std::vector<std::vector<double>> features(rows, std::vector<double>(kNumFeatures));
            std::vector<double> labels(rows);
            for (std::size_t i = 0; i < rows; ++i) {
                for (auto& v : features[i]) v = data_rng.normal();
                labels[i] = static_cast<double>(i % 2);
            }

            auto sgd_batch = [&](std::size_t batch) {
                ModelGrads batch_grads;
                for (std::size_t k = 0; k < spec.batch_size; ++k) {
                    const std::size_t row = batch * spec.batch_size + k;
                    Rng sample_rng(derive_seed(config.seed, 6, batch, k));
                    const ModelCache cache =
                        model_forward(model, features[row], DropoutMode::TRAIN, sample_rng);
                    const BceResult bce = bce_loss(cache.probability, labels[row]);
                    batch_grads.add(model_backward(model, cache, bce.d_prediction));
                }
                batch_grads.scale(1.0 / static_cast<double>(spec.batch_size));
                model.for_each_tensor([&](const std::string& name, std::vector<double>& params) {
                    const std::vector<double>* grads = batch_grads.block(name);
                    if (grads != nullptr && !grads->empty()) {
                        sgd_step(params, *grads, config.lr, name);
                    }
                });
            };

            TimingRecord record;
            record.n_qubits = q;
            record.n_blocks = b;
            record.repetitions = spec.reps;

            sgd_batch(0);  // warmup
            for (int rep = 0; rep < spec.reps; ++rep) {
                double epoch_total = 0.0;
                std::vector<double> step_times;
                for (std::size_t batch = 0; batch < spec.batches_per_epoch; ++batch) {
                    const double t = timed_call([&] { sgd_batch(batch); });
                    step_times.push_back(t);
                    epoch_total += t;
                }
                record.raw_epoch_seconds.push_back(epoch_total);
                record.raw_step_seconds.push_back(median(step_times));

                // embedding sub-phase: the B RX layers of one forward pass
                const QuantumParams zero_params(ansatz.param_count(), 0.0);
                Statevector state = new_zero_state(q);
                const double embed = timed_call([&] {
                    for (int block = 0; block < b; ++block) {
                        for (int qubit = 0; qubit < q; ++qubit) {
                            apply_gate(state,
                                       GateOp::rx(qubit, features[0][static_cast<std::size_t>(qubit)]));
                        }
                    }
                });
                record.raw_embedding_seconds.push_back(embed);
            }
            record.seconds_per_epoch = median(record.raw_epoch_seconds);
            record.seconds_per_training_step = median(record.raw_step_seconds);
            record.embedding_seconds = median(record.raw_embedding_seconds);
            result.records.push_back(record);
        }
    }

    // block-scaling fit at the designated qubit count
    std::vector<double> xs, ys;
    for (const auto& r : result.records) {
        if (r.n_qubits == spec.fit_qubits) {
            xs.push_back(static_cast<double>(r.n_blocks));
            ys.push_back(r.seconds_per_training_step);
        }
    }
    if (xs.size() >= 2) result.step_vs_blocks = linear_fit(xs, ys);

    // consecutive-qubit cost ratios per block count
    for (int b : spec.blocks) {
        std::vector<const TimingRecord*> series;
        for (const auto& r : result.records) {
            if (r.n_blocks == b) series.push_back(&r);
        }
        std::sort(series.begin(), series.end(),
                  [](const TimingRecord* a, const TimingRecord* c) {
                      return a->n_qubits < c->n_qubits;
                  });
        for (std::size_t i = 1; i < series.size(); ++i) {
            QubitRatio ratio;
            ratio.from_qubits = series[i - 1]->n_qubits;
            ratio.to_qubits = series[i]->n_qubits;
            ratio.n_blocks = b;
            ratio.ratio =
                series[i]->seconds_per_training_step / series[i - 1]->seconds_per_training_step;
            result.qubit_ratios.push_back(ratio);
        }
    }
    return result;
}

namespace {

std::string bench_header(const BenchSpec& spec) {
    std::ostringstream out;
    out << "# qcredit bench v1\n";
    out << "# seed=" << spec.seed << " reps=" << spec.reps << " batch_size=" << spec.batch_size
        << " batches_per_epoch=" << spec.batches_per_epoch
        << " layers_per_block=" << spec.layers_per_block << "\n";
    return out.str();
}

}  // namespace

std::string bench_csv(const BenchSpec& spec, const BenchResult& result) {
    std::ostringstream out;
    out << bench_header(spec);
    out << "n_qubits,n_blocks,repetitions,seconds_per_epoch,seconds_per_training_step,"
           "embedding_seconds\n";
    for (const auto& r : result.records) {
        out << r.n_qubits << ',' << r.n_blocks << ',' << r.repetitions << ','
            << fmt(r.seconds_per_epoch) << ',' << fmt(r.seconds_per_training_step) << ','
            << fmt(r.embedding_seconds) << '\n';
    }
    return out.str();
}

std::string bench_raw_csv(const BenchSpec& spec, const BenchResult& result) {
    std::ostringstream out;
    out << bench_header(spec);
    out << "n_qubits,n_blocks,rep,epoch_seconds,step_seconds,embedding_seconds\n";
    for (const auto& r : result.records) {
        for (std::size_t rep = 0; rep < r.raw_step_seconds.size(); ++rep) {
            out << r.n_qubits << ',' << r.n_blocks << ',' << rep << ','
                << fmt(r.raw_epoch_seconds[rep]) << ',' << fmt(r.raw_step_seconds[rep]) << ','
                << fmt(r.raw_embedding_seconds[rep]) << '\n';
        }
    }
    return out.str();
}

std::string bench_summary_csv(const BenchSpec& spec, const BenchResult& result) {
    std::ostringstream out;
    out << bench_header(spec);
    out << "metric,value\n";
    out << "fit_qubits," << spec.fit_qubits << '\n';
    out << "step_vs_blocks_slope," << fmt(result.step_vs_blocks.slope) << '\n';
    out << "step_vs_blocks_intercept," << fmt(result.step_vs_blocks.intercept) << '\n';
    out << "step_vs_blocks_r2," << fmt(result.step_vs_blocks.r_squared) << '\n';
    for (const auto& ratio : result.qubit_ratios) {
        out << "step_ratio_q" << ratio.from_qubits << "_to_q" << ratio.to_qubits << "_b"
            << ratio.n_blocks << ',' << fmt(ratio.ratio) << '\n';
    }
    return out.str();
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear_fit: need at least two points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.n_points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

}  // namespace qcredit
