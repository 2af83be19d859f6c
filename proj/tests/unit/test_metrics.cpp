#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qcredit/metrics.hpp"
#include "qcredit/rng.hpp"

using namespace qcredit;

namespace {

// O(n^2) pairwise oracle: wins + half ties over all (positive, negative) pairs
double pairwise_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    double wins = 0.0, ties = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1.0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0.0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) wins += 1.0;
            if (scores[i] == scores[j]) ties += 1.0;
        }
    }
    return (wins + 0.5 * ties) / pairs;
}

struct RandomInstance {
    std::vector<double> scores;
    std::vector<double> labels;
};

RandomInstance random_instance(Rng& rng, std::size_t max_n = 200) {
    RandomInstance inst;
    const std::size_t n = 2 + rng.below(max_n - 1);
    inst.scores.resize(n);
    inst.labels.resize(n);
    const bool heavy_ties = rng.below(3) == 0;
    for (std::size_t i = 0; i < n; ++i) {
        inst.scores[i] = heavy_ties ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform();
        inst.labels[i] = rng.below(2) == 0 ? 0.0 : 1.0;
    }
    // guarantee both classes
    inst.labels[0] = 0.0;
    inst.labels[n - 1] = 1.0;
    return inst;
}

}  // namespace

TEST_CASE("worked example: [0.1,0.4,0.35,0.8] / [0,0,1,1]") {
    const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
    const std::vector<double> labels = {0.0, 0.0, 1.0, 1.0};

    const AucScore score = auc(scores, labels);
    CHECK(score.value == 0.75);
    CHECK(score.n_pos == 2);
    CHECK(score.n_neg == 2);

    // thresholds 0.8, 0.4, 0.35, 0.1 give the hand-enumerated staircase
    const RocCurve curve = roc_curve(scores, labels);
    REQUIRE(curve.fpr.size() == 5);
    CHECK(curve.fpr == std::vector<double>{0.0, 0.0, 0.5, 0.5, 1.0});
    CHECK(curve.tpr == std::vector<double>{0.0, 0.5, 0.5, 1.0, 1.0});
}

TEST_CASE("degenerate score patterns") {
    // perfect separation passes through (0, 1)
    const RocCurve perfect = roc_curve({0.9, 0.8, 0.2, 0.1}, {1.0, 1.0, 0.0, 0.0});
    bool has_corner = false;
    for (std::size_t i = 0; i < perfect.fpr.size(); ++i) {
        has_corner = has_corner || (perfect.fpr[i] == 0.0 && perfect.tpr[i] == 1.0);
    }
    CHECK(has_corner);
    CHECK(auc({0.9, 0.8, 0.2, 0.1}, {1.0, 1.0, 0.0, 0.0}).value == 1.0);

    // all-equal scores collapse to the diagonal endpoints
    const RocCurve flat = roc_curve({0.5, 0.5, 0.5}, {1.0, 0.0, 1.0});
    REQUIRE(flat.fpr.size() == 2);
    CHECK(flat.fpr.back() == 1.0);
    CHECK(flat.tpr.back() == 1.0);
    CHECK(auc({0.5, 0.5, 0.5}, {1.0, 0.0, 1.0}).value == 0.5);
}

TEST_CASE("single-class inputs name the missing class") {
    CHECK_THROWS_WITH_AS(auc({0.1, 0.2}, {1.0, 1.0}), doctest::Contains("class 0"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(roc_curve({0.1, 0.2}, {0.0, 0.0}), doctest::Contains("class 1"),
                         std::invalid_argument);
}

TEST_CASE("rank AUC equals the pairwise oracle") {
    Rng rng(100);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(rng);
        const double expected = pairwise_auc(inst.scores, inst.labels);
        CHECK(std::abs(auc(inst.scores, inst.labels).value - expected) < 1e-12);
    }
}

TEST_CASE("rank AUC equals the trapezoidal ROC area") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng);
        const double area = trapezoid_area(roc_curve(inst.scores, inst.labels));
        CHECK(std::abs(auc(inst.scores, inst.labels).value - area) < 1e-12);
    }
}

TEST_CASE("score negation is exactly antisymmetric") {
    Rng rng(102);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(rng);
        std::vector<double> negated(inst.scores.size());
        for (std::size_t i = 0; i < negated.size(); ++i) negated[i] = -inst.scores[i];
        CHECK(auc(inst.scores, inst.labels).value + auc(negated, inst.labels).value == 1.0);
    }
}

TEST_CASE("AUC is invariant under strictly monotone score transforms") {
    Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(rng, 80);
        const double base = auc(inst.scores, inst.labels).value;

        std::vector<double> exp_scores(inst.scores.size());
        std::vector<double> affine_scores(inst.scores.size());
        for (std::size_t i = 0; i < inst.scores.size(); ++i) {
            exp_scores[i] = std::exp(inst.scores[i]);
            affine_scores[i] = 3.0 * inst.scores[i] + 11.0;
        }
        CHECK(auc(exp_scores, inst.labels).value == base);
        CHECK(auc(affine_scores, inst.labels).value == base);
    }
}

TEST_CASE("roc csv export") {
    const std::string csv = roc_csv(roc_curve({0.3, 0.7}, {0.0, 1.0}));
    CHECK(csv.substr(0, 18) == "threshold,fpr,tpr\n");
    CHECK(csv.find("inf") != std::string::npos);
    CHECK(csv.find("0,0\n") != std::string::npos);
}

TEST_CASE("tpr and fpr are non-decreasing along the curve") {
    Rng rng(104);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(rng, 60);
        const RocCurve curve = roc_curve(inst.scores, inst.labels);
        for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
            CHECK(curve.fpr[i] >= curve.fpr[i - 1]);
            CHECK(curve.tpr[i] >= curve.tpr[i - 1]);
            CHECK(curve.thresholds[i] < curve.thresholds[i - 1]);
        }
        CHECK(curve.fpr.front() == 0.0);
        CHECK(curve.tpr.front() == 0.0);
        CHECK(curve.fpr.back() == 1.0);
        CHECK(curve.tpr.back() == 1.0);
    }
}
