#include "qcredit/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcredit/rng.hpp"

namespace qcredit {

std::size_t Dataset::count_label(double label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void GeneratorSpec::validate() const {
    if (n_pos < 1 || n_neg < 1) {
        throw std::invalid_argument("GeneratorSpec: n_pos and n_neg must be >= 1");
    }
    if (!(signal_strength >= 0.0)) {
        throw std::invalid_argument("GeneratorSpec: signal_strength must be >= 0");
    }
}

std::vector<double> latent_weights(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, 1));
    std::vector<double> w(kNumFeatures);
    double norm2 = 0.0;
    for (auto& v : w) {
        v = rng.normal();
        norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : w) v *= inv;
    return w;
}

Dataset generate(const GeneratorSpec& spec) {
    spec.validate();
    const std::vector<double> w = latent_weights(spec);
    const std::size_t rows = spec.n_pos + spec.n_neg;

    Dataset dataset;
    dataset.features.resize(rows * kNumFeatures);
    dataset.labels.assign(rows, 0.0);

    Rng feature_rng(derive_seed(spec.seed, 2));
    for (auto& v : dataset.features) v = feature_rng.normal();

    Rng noise_rng(derive_seed(spec.seed, 3));
    std::vector<double> logits(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* x = dataset.row(i);
        double dot = 0.0;
        for (std::size_t j = 0; j < kNumFeatures; ++j) dot += w[j] * x[j];
        logits[i] = spec.signal_strength * dot + noise_rng.normal();
    }

    // exactly n_pos class-1 rows: the highest noisy logits
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return logits[a] > logits[b]; });
    for (std::size_t k = 0; k < spec.n_pos; ++k) dataset.labels[order[k]] = 1.0;
    return dataset;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || end != begin + cell.size()) {
        throw std::invalid_argument("load_csv: non-numeric cell '" + cell + "' on line " +
                                    std::to_string(line_no));
    }
    return value;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(file, line)) throw std::invalid_argument("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_line(line);
    if (header.size() != kNumFeatures + 1) {
        throw std::invalid_argument("load_csv: expected " + std::to_string(kNumFeatures) +
                                    " features plus a label column, got " +
                                    std::to_string(header.size()) + " columns");
    }
    std::size_t label_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "label") {
            label_col = c;
            break;
        }
    }
    if (label_col == header.size()) {
        throw std::invalid_argument("load_csv: missing label column in header");
    }

    Dataset dataset;
    std::size_t line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw std::invalid_argument("load_csv: line " + std::to_string(line_no) + " has " +
                                        std::to_string(cells.size()) + " columns, expected " +
                                        std::to_string(header.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double value = parse_cell(cells[c], line_no);
            if (c == label_col) {
                if (value != 0.0 && value != 1.0) {
                    throw std::invalid_argument("load_csv: label must be 0 or 1 on line " +
                                                std::to_string(line_no));
                }
                dataset.labels.push_back(value);
            } else {
                dataset.features.push_back(value);
            }
        }
    }
    if (dataset.labels.empty()) {
        throw std::invalid_argument("load_csv: no data rows in " + path);
    }
    return dataset;
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::invalid_argument("write_csv: cannot open " + path);
    for (std::size_t j = 0; j < dataset.n_features; ++j) {
        char name[8];
        std::snprintf(name, sizeof(name), "f%02zu", j + 1);
        file << name << ',';
    }
    file << "label\n";
    char buf[40];
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        const double* x = dataset.row(i);
        for (std::size_t j = 0; j < dataset.n_features; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", x[j]);
            file << buf << ',';
        }
        file << static_cast<int>(dataset.labels[i]) << '\n';
    }
    if (!file) throw std::runtime_error("write_csv: write failed for " + path);
}

namespace {

// Largest-remainder apportionment of `total` rows over classes, proportional
// to class sizes.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& class_sizes, double frac,
                                   std::size_t total) {
    std::vector<std::size_t> counts(class_sizes.size());
    std::vector<double> remainders(class_sizes.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < class_sizes.size(); ++c) {
        const double target = static_cast<double>(class_sizes[c]) * frac;
        counts[c] = static_cast<std::size_t>(std::floor(target));
        remainders[c] = target - std::floor(target);
        assigned += counts[c];
    }
    std::vector<std::size_t> order(class_sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < total; ++k) {
        ++counts[order[k % order.size()]];
        ++assigned;
    }
    return counts;
}

}  // namespace

void split(Dataset& dataset, double val_frac, double test_frac, std::uint64_t seed) {
    if (!(val_frac > 0.0 && val_frac < 1.0) || !(test_frac > 0.0 && test_frac < 1.0) ||
        val_frac + test_frac >= 1.0) {
        throw std::invalid_argument("split: fractions must be in (0,1) and sum below 1");
    }
    const std::size_t rows = dataset.rows();
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rows; ++i) {
        (dataset.labels[i] == 1.0 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw std::invalid_argument("split: dataset must contain both classes");
    }

    Rng pos_rng(derive_seed(seed, 10));
    Rng neg_rng(derive_seed(seed, 11));
    shuffle(pos, pos_rng);
    shuffle(neg, neg_rng);

    const std::vector<std::size_t> class_sizes = {pos.size(), neg.size()};
    const auto total_val = static_cast<std::size_t>(
        std::ceil(static_cast<double>(rows) * val_frac - 1e-9));
    const auto total_test = static_cast<std::size_t>(
        std::ceil(static_cast<double>(rows) * test_frac - 1e-9));
    const auto val_counts = apportion(class_sizes, val_frac, total_val);
    const auto test_counts = apportion(class_sizes, test_frac, total_test);

    dataset.train_idx.clear();
    dataset.val_idx.clear();
    dataset.test_idx.clear();
    const std::vector<std::vector<std::size_t>*> classes = {&pos, &neg};
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& members = *classes[c];
        const std::size_t n_val = val_counts[c];
        const std::size_t n_test = test_counts[c];
        if (n_val == 0 || n_test == 0 || n_val + n_test >= members.size()) {
            throw std::invalid_argument(
                "split: class " + std::string(c == 0 ? "1" : "0") +
                " would leave a split empty (has " + std::to_string(members.size()) + " rows)");
        }
        dataset.val_idx.insert(dataset.val_idx.end(), members.begin(), members.begin() + n_val);
        dataset.test_idx.insert(dataset.test_idx.end(), members.begin() + n_val,
                                members.begin() + n_val + n_test);
        dataset.train_idx.insert(dataset.train_idx.end(), members.begin() + n_val + n_test,
                                 members.end());
    }
    std::sort(dataset.train_idx.begin(), dataset.train_idx.end());
    std::sort(dataset.val_idx.begin(), dataset.val_idx.end());
    std::sort(dataset.test_idx.begin(), dataset.test_idx.end());
}

void fit_standardize(Dataset& dataset) {
    if (!dataset.has_split()) {
        throw std::invalid_argument("fit_standardize: dataset must be split first");
    }
    if (dataset.standardized) {
        throw std::invalid_argument("fit_standardize: dataset already standardized");
    }
    const std::size_t n = dataset.n_features;
    const double n_train = static_cast<double>(dataset.train_idx.size());
    dataset.feature_mean.assign(n, 0.0);
    dataset.feature_std.assign(n, 0.0);

    for (std::size_t i : dataset.train_idx) {
        const double* x = dataset.row(i);
        for (std::size_t j = 0; j < n; ++j) dataset.feature_mean[j] += x[j];
    }
    for (std::size_t j = 0; j < n; ++j) dataset.feature_mean[j] /= n_train;
    for (std::size_t i : dataset.train_idx) {
        const double* x = dataset.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x[j] - dataset.feature_mean[j];
            dataset.feature_std[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double sd = std::sqrt(dataset.feature_std[j] / n_train);
        if (sd < 1e-8) {
            sd = 1e-8;
            dataset.warnings.push_back("feature " + std::to_string(j + 1) +
                                       " is constant on train rows; std floored at 1e-8");
        }
        dataset.feature_std[j] = sd;
    }

    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        double* x = dataset.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = (x[j] - dataset.feature_mean[j]) / dataset.feature_std[j];
        }
    }
    dataset.standardized = true;
}

std::vector<double> apply_standardize(const Dataset& dataset, const double* row) {
    if (dataset.feature_mean.empty()) {
        throw std::invalid_argument("apply_standardize: statistics not fitted");
    }
    std::vector<double> out(dataset.n_features);
    for (std::size_t j = 0; j < dataset.n_features; ++j) {
        out[j] = (row[j] - dataset.feature_mean[j]) / dataset.feature_std[j];
    }
    return out;
}

}  // namespace qcredit
