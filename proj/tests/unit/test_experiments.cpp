#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcredit/experiments.hpp"

using namespace qcredit;

namespace {

Dataset sweep_dataset() {
    GeneratorSpec spec;
    spec.n_pos = 16;
    spec.n_neg = 48;
    spec.signal_strength = 2.0;
    spec.seed = 31;
    Dataset d = generate(spec);
    split(d, 0.10, 0.15, 5);
    fit_standardize(d);
    return d;
}

SweepSpec mini_sweep(const std::string& out_dir) {
    SweepSpec spec;
    spec.qubits = {4, 6};
    spec.blocks = {1, 2};
    spec.runs_per_cell = 1;
    spec.base.epochs = 2;
    spec.base.seed = 7;
    spec.cc_epochs_short = 2;
    spec.cc_epochs_long = 4;
    spec.jobs = 2;
    spec.out_dir = out_dir;
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("mini sweep emits all cells plus the two CC baselines") {
    const Dataset d = sweep_dataset();
    const auto dir = (std::filesystem::temp_directory_path() / "qcredit_sweep_a").string();
    std::filesystem::remove_all(dir);
    const SweepSpec spec = mini_sweep(dir);
    const SweepResult result = run_sweep(spec, d);

    REQUIRE(result.cells.size() == 6);  // 2x2 grid + 2 baselines
    int fh_cells = 0, cc_cells = 0;
    for (const auto& cell : result.cells) {
        (cell.kind == ModelKind::FH ? fh_cells : cc_cells) += 1;
        REQUIRE(cell.reports.size() == 1);
        CHECK(cell.mean_test_auc == cell.reports[0].test_auc);
        CHECK(cell.std_test_auc == 0.0);
    }
    CHECK(fh_cells == 4);
    CHECK(cc_cells == 2);

    CHECK(std::filesystem::exists(dir + "/matrix.csv"));
    CHECK(std::filesystem::exists(dir + "/fh_q4_b1_e2_run0_report.json"));
    CHECK(std::filesystem::exists(dir + "/cc_q4_b0_e4_run0_curves.csv"));

    const std::string matrix = read_file(dir + "/matrix.csv");
    CHECK(matrix.find("# qcredit sweep matrix v1") == 0);
    CHECK(matrix.find("seed=7") != std::string::npos);
    CHECK(matrix.find("model,n_qubits,n_blocks,epochs,runs,mean_test_auc,std_test_auc") !=
          std::string::npos);
    CHECK(matrix.find("\nfh,4,1,2,1,") != std::string::npos);
    CHECK(matrix.find("\ncc,4,0,4,1,") != std::string::npos);
}

TEST_CASE("cell means equal a recomputation from the per-cell reports") {
    const Dataset d = sweep_dataset();
    SweepSpec spec = mini_sweep("");
    spec.qubits = {4};
    spec.blocks = {1};
    spec.runs_per_cell = 3;
    const SweepResult result = run_sweep(spec, d);
    for (const auto& cell : result.cells) {
        double mean = 0.0;
        for (const auto& r : cell.reports) mean += r.test_auc;
        mean /= static_cast<double>(cell.reports.size());
        CHECK(cell.mean_test_auc == doctest::Approx(mean).epsilon(1e-15));
    }
}

TEST_CASE("sweep matrices are bit-identical across runs and job counts") {
    const Dataset d = sweep_dataset();
    const auto dir_a = (std::filesystem::temp_directory_path() / "qcredit_sweep_b1").string();
    const auto dir_b = (std::filesystem::temp_directory_path() / "qcredit_sweep_b2").string();
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    SweepSpec spec_a = mini_sweep(dir_a);
    SweepSpec spec_b = mini_sweep(dir_b);
    spec_a.jobs = 1;
    spec_b.jobs = 4;
    run_sweep(spec_a, d);
    run_sweep(spec_b, d);
    CHECK(read_file(dir_a + "/matrix.csv") == read_file(dir_b + "/matrix.csv"));

    SweepSpec other = mini_sweep(dir_a);
    other.base.seed = 8;
    const SweepResult changed = run_sweep(other, d);
    const SweepResult original = run_sweep(mini_sweep(""), d);
    CHECK(changed.cells[0].mean_test_auc != original.cells[0].mean_test_auc);
}

TEST_CASE("bench keeps raw samples and produces monotone qubit ratios") {
    BenchSpec spec;
    spec.qubits = {4, 5};
    spec.blocks = {1, 2};
    spec.reps = 3;
    spec.batch_size = 4;
    spec.batches_per_epoch = 2;
    spec.fit_qubits = 4;
    const BenchResult result = run_bench(spec);

    REQUIRE(result.records.size() == 4);
    for (const auto& r : result.records) {
        CHECK(r.raw_step_seconds.size() == 3);
        CHECK(r.raw_epoch_seconds.size() == 3);
        CHECK(r.seconds_per_training_step > 0.0);
        CHECK(r.seconds_per_epoch >= r.seconds_per_training_step);
        CHECK(r.embedding_seconds > 0.0);
    }
    REQUIRE(result.qubit_ratios.size() == 2);
    for (const auto& ratio : result.qubit_ratios) {
        CHECK(ratio.from_qubits == 4);
        CHECK(ratio.to_qubits == 5);
        CHECK(ratio.ratio >= 1.0);  // more qubits never cheaper
    }
    CHECK(result.step_vs_blocks.n_points == 2);

    const std::string csv = bench_csv(spec, result);
    CHECK(csv.find("n_qubits,n_blocks,repetitions,seconds_per_epoch,") != std::string::npos);
    const std::string raw = bench_raw_csv(spec, result);
    CHECK(std::count(raw.begin(), raw.end(), '\n') == 2 + 1 + 12);  // header lines + 4 cells x 3 reps
    const std::string summary = bench_summary_csv(spec, result);
    CHECK(summary.find("step_vs_blocks_r2,") != std::string::npos);
    CHECK(summary.find("step_ratio_q4_to_q5_b1,") != std::string::npos);
}

TEST_CASE("linear fit recovers exact lines and reports r2") {
    const LinearFit exact = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(exact.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(exact.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    // a pure quadratic over 1..6 still fits a line with r2 just above 0.95
    const LinearFit quad = linear_fit({1, 2, 3, 4, 5, 6}, {1, 4, 9, 16, 25, 36});
    CHECK(quad.r_squared > 0.95);
    CHECK(quad.r_squared < 0.97);

    CHECK_THROWS_AS(linear_fit({1.0}, {2.0}), std::invalid_argument);
}
