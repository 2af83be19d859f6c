#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qcredit {

// ROC points swept over descending score thresholds; tied scores collapse
// into one threshold. Endpoints (0,0) and (1,1) are always present.
struct RocCurve {
    std::vector<double> thresholds;  // descending; +inf for the (0,0) point
    std::vector<double> fpr;
    std::vector<double> tpr;
};

struct AucScore {
    double value = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<double>& labels);

// Rank-based (Mann-Whitney) AUC with midrank tie correction. The value is
// reported on the 2^-53 grid, which makes score negation exactly
// antisymmetric: auc(s) + auc(-s) == 1.
AucScore auc(const std::vector<double>& scores, const std::vector<double>& labels);

double trapezoid_area(const RocCurve& curve);

// "threshold,fpr,tpr" rows
std::string roc_csv(const RocCurve& curve);

}  // namespace qcredit
