#include "lcq/metrics.hpp"

#include <cmath>

namespace lcq {

ConfusionCounts confusion(std::span<const int> y_true,
                          std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        throw validation_error("label vectors differ in length");
    if (y_true.empty())
        throw validation_error("empty label vectors");

    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1))
            throw validation_error("labels must be 0 or 1");
        if (t == 1)
            p == 1 ? ++c.tp : ++c.fn;
        else
            p == 1 ? ++c.fp : ++c.tn;
    }
    return c;
}

ClassMetrics classification_metrics(const ConfusionCounts &c) {
    if (c.total() <= 0)
        throw validation_error("confusion counts are empty");

    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double tn = static_cast<double>(c.tn);

    ClassMetrics m;
    const auto ratio = [&m](double num, double den) {
        if (den <= 0.0) {
            m.degenerate = true;
            return 0.0;
        }
        return num / den;
    };
    m.sen = ratio(tp, tp + fn);
    m.spe = ratio(tn, tn + fp);
    m.acc = (tp + tn) / (tp + fp + fn + tn);
    m.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);

    const double den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (den2 <= 0.0) {
        m.mcc = 0.0; // empty marginal
        m.degenerate = true;
    } else {
        m.mcc = (tp * tn - fp * fn) / std::sqrt(den2);
    }
    return m;
}

ChiSquareResult chi_square_vs_gt(const ConfusionCounts &c) {
    const long long total = c.total();
    if (total <= 0)
        throw validation_error("confusion counts are empty");

    // row 1: ground truth (positives, negatives); row 2: prediction
    const double o[2][2] = {
        {static_cast<double>(c.tp + c.fn), static_cast<double>(c.fp + c.tn)},
        {static_cast<double>(c.tp + c.fp), static_cast<double>(c.fn + c.tn)}};
    const double grand = 2.0 * static_cast<double>(total);
    const double col0 = o[0][0] + o[1][0];
    const double col1 = o[0][1] + o[1][1];

    ChiSquareResult r;
    if (col0 <= 0.0 || col1 <= 0.0) {
        r.degenerate = true;
        return r; // chi2 = 0, p = 1, phi = 0
    }

    const double row = static_cast<double>(total); // both row sums
    double chi2 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double e0 = row * col0 / grand;
        const double e1 = row * col1 / grand;
        chi2 += (o[i][0] - e0) * (o[i][0] - e0) / e0;
        chi2 += (o[i][1] - e1) * (o[i][1] - e1) / e1;
    }

    r.chi2 = chi2;
    // survival function of chi-square with one degree of freedom
    r.p_value = std::erfc(std::sqrt(chi2 / 2.0));
    r.phi = std::sqrt(chi2 / grand);
    return r;
}

MetricReport evaluate(std::span<const int> y_true,
                      std::span<const int> y_pred) {
    const ConfusionCounts c = confusion(y_true, y_pred);
    return {classification_metrics(c), chi_square_vs_gt(c)};
}

} // namespace lcq
