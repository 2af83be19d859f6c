#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcredit/training.hpp"

namespace qcredit {

// Qubit/block grid evaluated with repeat_runs per cell, plus classical
// counterpart baselines at a short and a long epoch budget. Every cell shares
// the dataset and its splits.
struct SweepSpec {
    std::vector<int> qubits = {6, 8, 10, 12, 14, 16, 18};
    std::vector<int> blocks = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int runs_per_cell = 5;
    TrainConfig base;  // epochs/lr/batch/dropout/layers + master seed
    int cc_epochs_short = 350;
    int cc_epochs_long = 3500;
    int cc_qubits = 0;  // surrogate width of the CC baselines; 0 = first qubit value
    int jobs = 1;       // worker pool over runs; cells stay bit-reproducible
    std::string out_dir;

    void validate() const;
};

struct SweepCell {
    ModelKind kind = ModelKind::FH;
    int n_qubits = 0;
    int n_blocks = 0;  // 0 for CC baseline rows
    int epochs = 0;
    int runs = 0;
    double mean_test_auc = 0.0;
    double std_test_auc = 0.0;
    std::vector<RunReport> reports;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // FH grid in (qubits, blocks) order, then CC rows
};

// Runs the grid; when spec.out_dir is set, writes the matrix CSV plus per-run
// report/curve files there.
SweepResult run_sweep(const SweepSpec& spec, const Dataset& dataset);

std::string sweep_matrix_csv(const SweepSpec& spec, const SweepResult& result);

// Benchmark grid: per-cell median seconds per SGD training step and per epoch
// (a fixed batch set), plus the embedding-gate sub-phase of one forward.
struct BenchSpec {
    std::vector<int> qubits = {8};
    std::vector<int> blocks = {1, 2, 3, 4, 5, 6};
    int layers_per_block = 1;
    int reps = 3;
    std::size_t batch_size = 16;
    std::size_t batches_per_epoch = 8;
    std::uint64_t seed = 1;
    int fit_qubits = 8;  // qubit count whose block scaling gets the linear fit

    void validate() const;
};

struct TimingRecord {
    int n_qubits = 0;
    int n_blocks = 0;
    int repetitions = 0;
    double seconds_per_epoch = 0.0;          // median over reps
    double seconds_per_training_step = 0.0;  // median over reps
    double embedding_seconds = 0.0;          // median over reps
    std::vector<double> raw_epoch_seconds;
    std::vector<double> raw_step_seconds;
    std::vector<double> raw_embedding_seconds;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

struct QubitRatio {
    int from_qubits = 0;
    int to_qubits = 0;
    int n_blocks = 0;
    double ratio = 0.0;  // step_seconds(to) / step_seconds(from)
};

struct BenchResult {
    std::vector<TimingRecord> records;
    LinearFit step_vs_blocks;          // at fit_qubits
    std::vector<QubitRatio> qubit_ratios;
};

BenchResult run_bench(const BenchSpec& spec);

std::string bench_csv(const BenchSpec& spec, const BenchResult& result);
std::string bench_raw_csv(const BenchSpec& spec, const BenchResult& result);
std::string bench_summary_csv(const BenchSpec& spec, const BenchResult& result);

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qcredit
