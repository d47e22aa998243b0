#pragma once

#include <span>

#include "lcq/errors.hpp"

namespace lcq {

struct ConfusionCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;

    long long total() const { return tp + fp + fn + tn; }
};

struct ClassMetrics {
    double sen = 0.0;
    double spe = 0.0;
    double acc = 0.0;
    double f1 = 0.0;
    double mcc = 0.0;
    bool degenerate = false; // some denominator was empty; that metric is 0
};

struct ChiSquareResult {
    double chi2 = 0.0;
    double p_value = 1.0;
    double phi = 0.0;
    bool degenerate = false; // an expected cell count was zero
};

struct MetricReport {
    ClassMetrics cls;
    ChiSquareResult chi;
};

// Labels are {0, 1} with 1 the positive (detection) class.
ConfusionCounts confusion(std::span<const int> y_true,
                          std::span<const int> y_pred);

ClassMetrics classification_metrics(const ConfusionCounts &c);

// Homogeneity chi-square between the ground-truth label distribution
// (tp+fn positives, fp+tn negatives) and the predicted one (tp+fp, fn+tn),
// df = 1, no continuity correction. phi = sqrt(chi2 / N) with N the 2x2
// table's grand total (2 * sample count).
ChiSquareResult chi_square_vs_gt(const ConfusionCounts &c);

MetricReport evaluate(std::span<const int> y_true, std::span<const int> y_pred);

} // namespace lcq
