#include "qcredit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qcredit {

namespace {

struct ClassCounts {
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

ClassCounts check_classes(const std::vector<double>& scores, const std::vector<double>& labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("metrics: scores and labels must have equal length");
    }
    if (scores.empty()) {
        throw std::invalid_argument("metrics: empty input");
    }
    ClassCounts counts;
    for (double y : labels) {
        if (y == 1.0) {
            ++counts.n_pos;
        } else if (y == 0.0) {
            ++counts.n_neg;
        } else {
            throw std::invalid_argument("metrics: labels must be 0 or 1");
        }
    }
    if (counts.n_pos == 0) throw std::invalid_argument("metrics: no positive (class 1) samples");
    if (counts.n_neg == 0) throw std::invalid_argument("metrics: no negative (class 0) samples");
    return counts;
}

std::vector<std::size_t> order_by_score_desc(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<double>& labels) {
    const ClassCounts counts = check_classes(scores, labels);
    const auto order = order_by_score_desc(scores);

    RocCurve curve;
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // consume the whole tie group at this score
        while (i < order.size() && scores[order[i]] == threshold) {
            if (labels[order[i]] == 1.0) {
                ++tp;
            } else {
                ++fp;
            }
            ++i;
        }
        curve.thresholds.push_back(threshold);
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(counts.n_neg));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(counts.n_pos));
    }
    return curve;
}

AucScore auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    const ClassCounts counts = check_classes(scores, labels);
    const auto order = order_by_score_desc(scores);

    // Tie-grouped pair counting; equivalent to midrank Mann-Whitney and to the
    // trapezoidal area under roc_curve. wins/ties stay exact in doubles.
    double wins = 0.0;
    double ties = 0.0;
    double neg_below = static_cast<double>(counts.n_neg);
    std::size_t i = 0;
    while (i < order.size()) {
        const double score = scores[order[i]];
        double group_pos = 0.0;
        double group_neg = 0.0;
        while (i < order.size() && scores[order[i]] == score) {
            if (labels[order[i]] == 1.0) {
                ++group_pos;
            } else {
                ++group_neg;
            }
            ++i;
        }
        neg_below -= group_neg;  // negatives scoring strictly lower than this group
        wins += group_pos * neg_below;
        ties += group_pos * group_neg;
    }

    const double den = static_cast<double>(counts.n_pos) * static_cast<double>(counts.n_neg);
    // Signed offset from 1/2, quantized to the 2^-53 grid so that 0.5 +/- v is
    // exact and negating scores flips the value exactly.
    const double g = wins + 0.5 * ties - 0.5 * den;
    const double v = std::nearbyint((g / den) * 0x1.0p53) * 0x1.0p-53;

    AucScore score;
    score.value = 0.5 + v;
    score.n_pos = counts.n_pos;
    score.n_neg = counts.n_neg;
    return score;
}

double trapezoid_area(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
        area += (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]) / 2.0;
    }
    return area;
}

std::string roc_csv(const RocCurve& curve) {
    std::ostringstream out;
    out << "threshold,fpr,tpr\n";
    out.precision(17);
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << curve.thresholds[i] << ',' << curve.fpr[i] << ',' << curve.tpr[i] << '\n';
    }
    return out.str();
}

}  // namespace qcredit
