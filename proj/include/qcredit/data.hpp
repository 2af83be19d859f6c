#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcredit {

inline constexpr std::size_t kNumFeatures = 21;

// Feature matrix with binary labels, optional train/validation/test split and
// preprocessing statistics fitted on the train rows only.
struct Dataset {
    std::size_t n_features = kNumFeatures;
    std::vector<double> features;  // rows x n_features, row-major
    std::vector<double> labels;    // 0 or 1

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> val_idx;
    std::vector<std::size_t> test_idx;

    std::vector<double> feature_mean;  // fitted on train rows
    std::vector<double> feature_std;
    bool standardized = false;
    std::vector<std::string> warnings;

    std::size_t rows() const { return labels.size(); }
    const double* row(std::size_t i) const { return features.data() + i * n_features; }
    double* row(std::size_t i) { return features.data() + i * n_features; }
    bool has_split() const { return !train_idx.empty(); }

    std::size_t count_label(double label) const;
};

// Synthetic imbalanced credit-style data: standard-normal features, a latent
// logit signal_strength * (w.x) + N(0,1) noise, and exactly n_pos rows with
// the highest noisy logits labelled class 1.
struct GeneratorSpec {
    std::size_t n_pos = 246;
    std::size_t n_neg = 2000;
    double signal_strength = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

Dataset generate(const GeneratorSpec& spec);

// the unit-norm latent weight vector the generator derives from spec.seed
std::vector<double> latent_weights(const GeneratorSpec& spec);

// CSV with header f01..f21,label; '.' decimal point, 17 significant digits.
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& dataset, const std::string& path);

// Stratified split; per-class counts chosen by largest remainder against
// ceil(rows * frac) totals, so each split's class mix stays within one row of
// the global mix. Remainder is train.
void split(Dataset& dataset, double val_frac, double test_frac, std::uint64_t seed);

// z-score all rows with mean/std fitted on the train rows; stds below 1e-8
// are floored and reported in dataset.warnings.
void fit_standardize(Dataset& dataset);
std::vector<double> apply_standardize(const Dataset& dataset, const double* row);

}  // namespace qcredit
