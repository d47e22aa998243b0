#include "lcq/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lcq/linalg.hpp"

namespace lcq {

namespace {

constexpr double kSymTol = 1e-8;
constexpr double kPsdTol = -1e-8;

// I_up / I_low membership for the violating-pair selection.
bool in_up(int y, double alpha, double c) {
    return (y > 0 && alpha < c) || (y < 0 && alpha > 0.0);
}
bool in_low(int y, double alpha, double c) {
    return (y > 0 && alpha > 0.0) || (y < 0 && alpha < c);
}

} // namespace

SvmModel train_precomputed(const GramMatrix &K, std::span<const int> y,
                           double C, double tol, int max_passes) {
    if (!K.square())
        throw validation_error("training kernel must be square");
    const std::size_t m = K.rows;
    if (y.size() != m)
        throw validation_error("label count must match kernel size");
    if (m < 2)
        throw validation_error("need at least two training samples");
    if (!(C > 0.0))
        throw validation_error("C must be positive");

    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1)
            has_pos = true;
        else if (v == -1)
            has_neg = true;
        else
            throw validation_error("labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        throw validation_error("training set must contain both classes");

    if (K.symmetry_defect() > kSymTol)
        throw validation_error("training kernel is not symmetric");
    if (min_eigenvalue_sym(K.a.data(), m) < kPsdTol)
        throw validation_error("training kernel is not PSD within tolerance");

    SvmModel model;
    model.alphas.assign(m, 0.0);
    model.C = C;
    model.y.assign(y.begin(), y.end());
    model.sample_ids = K.row_ids;

    // g_t = sum_s alpha_s y_s K_st, maintained incrementally. The violation
    // scores are -y_t grad_t = y_t - g_t.
    std::vector<double> g(m, 0.0);

    int iter = 0;
    bool converged = false;
    while (iter < max_passes) {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        std::size_t i = m, j = m;
        for (std::size_t t = 0; t < m; ++t) {
            const double score = static_cast<double>(y[t]) - g[t];
            if (in_up(y[t], model.alphas[t], C) && score > up_best) {
                up_best = score;
                i = t;
            }
            if (in_low(y[t], model.alphas[t], C) && score < low_best) {
                low_best = score;
                j = t;
            }
        }
        if (i == m || j == m || up_best - low_best <= tol) {
            converged = true;
            break;
        }
        ++iter;

        const double ai_old = model.alphas[i];
        const double aj_old = model.alphas[j];
        const int yi = y[i], yj = y[j];

        double lo, hi;
        if (yi != yj) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(C, C + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - C);
            hi = std::min(C, ai_old + aj_old);
        }

        const double eta = K.at(i, i) + K.at(j, j) - 2.0 * K.at(i, j);
        const double ei = g[i] - static_cast<double>(yi);
        const double ej = g[j] - static_cast<double>(yj);

        double aj_new;
        if (eta > 1e-12) {
            aj_new = std::clamp(aj_old + static_cast<double>(yj) * (ei - ej) / eta,
                                lo, hi);
        } else {
            // flat direction: move to whichever box end improves the dual
            const double slope = static_cast<double>(yj) * (ei - ej);
            aj_new = slope > 0.0 ? hi : lo;
        }
        if (std::abs(aj_new - aj_old) < 1e-14) {
            // numerically stuck pair; report the state honestly
            converged = false;
            break;
        }
        const double ai_new =
            ai_old + static_cast<double>(yi * yj) * (aj_old - aj_new);

        model.alphas[i] = ai_new;
        model.alphas[j] = aj_new;
        const double di = (ai_new - ai_old) * static_cast<double>(yi);
        const double dj = (aj_new - aj_old) * static_cast<double>(yj);
        for (std::size_t t = 0; t < m; ++t)
            g[t] += di * K.at(i, t) + dj * K.at(j, t);
    }

    model.converged = converged;
    model.iterations = iter;

    // Bias: average y_t - g_t over unbounded support vectors; otherwise the
    // midpoint of the feasibility interval.
    double bias_sum = 0.0;
    std::size_t unbounded = 0;
    for (std::size_t t = 0; t < m; ++t) {
        if (model.alphas[t] > 1e-12)
            model.support.push_back(t);
        if (model.alphas[t] > 1e-12 && model.alphas[t] < C - 1e-12) {
            bias_sum += static_cast<double>(y[t]) - g[t];
            ++unbounded;
        }
    }
    if (unbounded > 0) {
        model.bias = bias_sum / static_cast<double>(unbounded);
    } else {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < m; ++t) {
            const double score = static_cast<double>(y[t]) - g[t];
            if (in_up(y[t], model.alphas[t], C))
                up_best = std::max(up_best, score);
            if (in_low(y[t], model.alphas[t], C))
                low_best = std::min(low_best, score);
        }
        model.bias = 0.5 * (up_best + low_best);
    }
    return model;
}

Prediction predict(const SvmModel &model, const GramMatrix &K_test_train) {
    const std::size_t m = model.alphas.size();
    if (K_test_train.cols != m)
        throw validation_error("kernel columns must match the training set");

    Prediction out;
    out.decision.resize(K_test_train.rows);
    out.labels.resize(K_test_train.rows);
    for (std::size_t t = 0; t < K_test_train.rows; ++t) {
        double d = model.bias;
        for (std::size_t s = 0; s < m; ++s)
            d += model.alphas[s] * static_cast<double>(model.y[s]) *
                 K_test_train.at(t, s);
        out.decision[t] = d;
        out.labels[t] = d > 0.0 ? 1 : -1;
    }
    return out;
}

double dual_objective(const GramMatrix &K, std::span<const int> y,
                      std::span<const double> alphas) {
    const std::size_t m = K.rows;
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        linear += alphas[i];
        for (std::size_t j = 0; j < m; ++j)
            quad += alphas[i] * alphas[j] * static_cast<double>(y[i] * y[j]) *
                    K.at(i, j);
    }
    return linear - 0.5 * quad;
}

void save_model(std::ostream &out, const SvmModel &model) {
    out.precision(17);
    out << "lcq-svm 1\n";
    out << model.alphas.size() << ' ' << model.C << ' ' << model.bias << ' '
        << (model.converged ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < model.alphas.size(); ++i)
        out << (i ? " " : "") << model.alphas[i];
    out << '\n';
    for (std::size_t i = 0; i < model.y.size(); ++i)
        out << (i ? " " : "") << model.y[i];
    out << '\n';
    for (std::size_t i = 0; i < model.alphas.size(); ++i)
        out << (i < model.sample_ids.size() ? model.sample_ids[i] : "-")
            << '\n';
}

SvmModel load_model(std::istream &in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "lcq-svm" || version != 1)
        throw load_error("svm model: bad header");
    std::size_t m = 0;
    SvmModel model;
    int converged = 0;
    if (!(in >> m >> model.C >> model.bias >> converged))
        throw load_error("svm model: bad dimensions line");
    model.converged = converged != 0;
    model.alphas.resize(m);
    for (double &a : model.alphas)
        if (!(in >> a))
            throw load_error("svm model: truncated alphas");
    model.y.resize(m);
    for (int &v : model.y)
        if (!(in >> v))
            throw load_error("svm model: truncated labels");
    in >> std::ws;
    model.sample_ids.resize(m);
    for (std::string &id : model.sample_ids)
        if (!std::getline(in, id))
            throw load_error("svm model: truncated sample ids");
    for (std::size_t t = 0; t < m; ++t)
        if (model.alphas[t] > 1e-12)
            model.support.push_back(t);
    return model;
}

} // namespace lcq
