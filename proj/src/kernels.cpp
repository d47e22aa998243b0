#include "lcq/kernels.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "lcq/simd.hpp"

namespace lcq {

namespace {

void check_labels(std::span<const int> y, std::size_t m) {
    if (y.size() != m)
        throw validation_error("label count must match Gram size");
    if (m < 2)
        throw validation_error("need at least two samples");
    for (int v : y)
        if (v != -1 && v != 1)
            throw validation_error("labels must be -1 or +1");
}

void mirror_upper(GramMatrix &k) {
    for (std::size_t r = 0; r < k.rows; ++r)
        for (std::size_t c = r + 1; c < k.cols; ++c)
            k.at(c, r) = k.at(r, c);
}

double frobenius_inner(const GramMatrix &a, const GramMatrix &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i)
        s += a.a[i] * b.a[i];
    return s;
}

// K_c = H K H with H = I - (1/m) 11^T, computed through row/column means.
GramMatrix center(const GramMatrix &k) {
    const std::size_t m = k.rows;
    std::vector<double> row_mean(m, 0.0), col_mean(m, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            const double v = k.at(r, c);
            row_mean[r] += v;
            col_mean[c] += v;
            total += v;
        }
    for (std::size_t r = 0; r < m; ++r)
        row_mean[r] /= static_cast<double>(m);
    for (std::size_t c = 0; c < m; ++c)
        col_mean[c] /= static_cast<double>(m);
    total /= static_cast<double>(m) * static_cast<double>(m);

    GramMatrix out(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            out.at(r, c) = k.at(r, c) - row_mean[r] - col_mean[c] + total;
    return out;
}

} // namespace

double GramMatrix::symmetry_defect() const {
    if (!square())
        throw validation_error("symmetry defect needs a square matrix");
    double worst = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = r + 1; c < cols; ++c)
            worst = std::max(worst, std::abs(at(r, c) - at(c, r)));
    return worst;
}

EmbeddingCache embed_samples(const EmbeddingConfig &cfg,
                             const FeatureMatrix &X) {
    cfg.validate();
    if (X.dim != static_cast<std::size_t>(cfg.n))
        throw validation_error("feature dimension must match qubit count");

    EmbeddingCache cache;
    cache.n = cfg.n;
    cache.count = X.count;
    cache.ids = X.ids;
    const std::size_t plane = static_cast<std::size_t>(cfg.n) * X.count;
    cache.bx.resize(plane);
    cache.by.resize(plane);
    cache.bz.resize(plane);

    for (std::size_t s = 0; s < X.count; ++s) {
        const StateVector state =
            run_circuit(build_embedding_circuit(cfg, X.row_span(s)));
        for (int q = 1; q <= cfg.n; ++q) {
            const auto b = reduced_density(state, q).bloch();
            const std::size_t off =
                static_cast<std::size_t>(q - 1) * X.count + s;
            cache.bx[off] = b[0];
            cache.by[off] = b[1];
            cache.bz[off] = b[2];
        }
    }
    return cache;
}

std::vector<GramMatrix> quantum_gram_stack(const EmbeddingCache &rows,
                                           const EmbeddingCache &cols) {
    if (rows.n != cols.n)
        throw validation_error("mismatched qubit counts in Gram assembly");
    const auto &k = simd::ops();
    std::vector<GramMatrix> stack;
    stack.reserve(static_cast<std::size_t>(rows.n));
    for (int q = 1; q <= rows.n; ++q) {
        GramMatrix g(rows.count, cols.count);
        g.row_ids = rows.ids;
        g.col_ids = cols.ids;
        for (std::size_t r = 0; r < rows.count; ++r) {
            const std::size_t off = static_cast<std::size_t>(q - 1) * rows.count + r;
            k.bloch_row(cols.qubit_bx(q), cols.qubit_by(q), cols.qubit_bz(q),
                        cols.count, rows.bx[off], rows.by[off], rows.bz[off],
                        &g.at(r, 0));
        }
        stack.push_back(std::move(g));
    }
    return stack;
}

std::vector<GramMatrix> quantum_gram_stack(const EmbeddingCache &samples) {
    auto stack = quantum_gram_stack(samples, samples);
    for (auto &g : stack)
        mirror_upper(g);
    return stack;
}

std::vector<GramMatrix> quantum_gram_stack(const FeatureMatrix &X,
                                           const EmbeddingConfig &cfg) {
    return quantum_gram_stack(embed_samples(cfg, X));
}

Alignment centered_alignment(const GramMatrix &k, std::span<const int> y) {
    if (!k.square())
        throw validation_error("alignment needs a square Gram matrix");
    check_labels(y, k.rows);

    const std::size_t m = k.rows;
    GramMatrix yy(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            yy.at(r, c) = static_cast<double>(y[r] * y[c]);

    const GramMatrix kc = center(k);
    const GramMatrix yc = center(yy);
    const double kn = std::sqrt(frobenius_inner(kc, kc));
    const double yn = std::sqrt(frobenius_inner(yc, yc));
    if (kn <= 1e-300 || yn <= 1e-300)
        return {0.0, true};
    return {frobenius_inner(kc, yc) / (kn * yn), false};
}

LambdaWeights compute_lambdas(const std::vector<GramMatrix> &stack,
                              std::span<const int> y) {
    if (stack.empty())
        throw validation_error("empty kernel stack");

    LambdaWeights out;
    out.alignments.reserve(stack.size());
    double positive_sum = 0.0;
    for (const GramMatrix &k : stack) {
        const Alignment a = centered_alignment(k, y);
        out.alignments.push_back(a);
        positive_sum += std::max(a.value, 0.0);
    }

    out.lambda.assign(stack.size(), 0.0);
    if (positive_sum <= 0.0) {
        out.uniform_fallback = true;
        const double u = 1.0 / static_cast<double>(stack.size());
        for (double &l : out.lambda)
            l = u;
        return out;
    }
    for (std::size_t i = 0; i < stack.size(); ++i)
        out.lambda[i] = std::max(out.alignments[i].value, 0.0) / positive_sum;
    return out;
}

GramMatrix combine_kernels(const KernelStack &stack) {
    if (stack.k.empty())
        throw validation_error("empty kernel stack");
    if (stack.lambda.size() != stack.k.size())
        throw validation_error("lambda count must match kernel count");
    double lam_sum = 0.0;
    for (double l : stack.lambda) {
        if (l < 0.0)
            throw validation_error("lambda entries must be non-negative");
        lam_sum += l;
    }
    if (std::abs(lam_sum - 1.0) > 1e-8)
        throw validation_error("lambda must sum to one");

    const GramMatrix &first = stack.k.front();
    GramMatrix out(first.rows, first.cols);
    out.row_ids = first.row_ids;
    out.col_ids = first.col_ids;
    for (std::size_t i = 0; i < stack.k.size(); ++i) {
        const GramMatrix &k = stack.k[i];
        if (k.rows != out.rows || k.cols != out.cols)
            throw validation_error("kernel stack has mismatched shapes");
        const double l = stack.lambda[i];
        for (std::size_t e = 0; e < out.a.size(); ++e)
            out.a[e] += l * k.a[e];
    }
    return out;
}

GramMatrix linear_gram(const FeatureMatrix &xa, const FeatureMatrix &xb) {
    if (xa.dim != xb.dim)
        throw validation_error("linear kernel needs equal feature dimensions");
    const auto &k = simd::ops();
    GramMatrix g(xa.count, xb.count);
    g.row_ids = xa.ids;
    g.col_ids = xb.ids;
    const bool same = &xa == &xb;
    for (std::size_t r = 0; r < xa.count; ++r) {
        const std::size_t c0 = same ? r : 0;
        for (std::size_t c = c0; c < xb.count; ++c)
            g.at(r, c) = k.dot(xa.row(r), xb.row(c), xa.dim);
    }
    if (same)
        mirror_upper(g);
    return g;
}

GramMatrix rbf_gram(const FeatureMatrix &xa, const FeatureMatrix &xb,
                    double gamma) {
    if (xa.dim != xb.dim)
        throw validation_error("rbf kernel needs equal feature dimensions");
    if (!(gamma > 0.0))
        throw validation_error("rbf gamma must be positive");
    const auto &k = simd::ops();
    GramMatrix g(xa.count, xb.count);
    g.row_ids = xa.ids;
    g.col_ids = xb.ids;
    const bool same = &xa == &xb;
    for (std::size_t r = 0; r < xa.count; ++r) {
        const std::size_t c0 = same ? r : 0;
        for (std::size_t c = c0; c < xb.count; ++c)
            g.at(r, c) = std::exp(-gamma * k.sqdist(xa.row(r), xb.row(c), xa.dim));
    }
    if (same)
        mirror_upper(g);
    return g;
}

double rbf_gamma_auto(const FeatureMatrix &x) {
    if (x.count == 0 || x.dim == 0)
        throw validation_error("cannot derive gamma from an empty matrix");
    double mean = 0.0;
    for (double v : x.x)
        mean += v;
    mean /= static_cast<double>(x.x.size());
    double var = 0.0;
    for (double v : x.x)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.x.size());
    if (var <= 0.0)
        return 1.0; // constant features; any gamma gives the all-ones kernel
    return 1.0 / (static_cast<double>(x.dim) * var);
}

void export_gram_stack(std::ostream &out,
                       const std::vector<GramMatrix> &stack) {
    if (stack.empty())
        throw validation_error("empty kernel stack");
    const std::size_t m = stack.front().rows;
    for (const GramMatrix &k : stack)
        if (!k.square() || k.rows != m)
            throw validation_error("export needs square kernels of equal size");

    out.precision(17);
    out << m << ' ' << stack.size() << '\n';
    for (const GramMatrix &k : stack) {
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                if (c)
                    out << ' ';
                out << k.at(r, c);
            }
            out << '\n';
        }
    }
}

std::vector<GramMatrix> import_gram_stack(std::istream &in) {
    std::size_t m = 0, count = 0;
    if (!(in >> m >> count))
        throw load_error("gram stack: malformed header");
    std::vector<GramMatrix> stack;
    stack.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        GramMatrix k(m, m);
        for (double &v : k.a)
            if (!(in >> v))
                throw load_error("gram stack: truncated matrix block");
        stack.push_back(std::move(k));
    }
    return stack;
}

namespace {

double combined_alignment(const EmbeddingConfig &cfg, const FeatureMatrix &X,
                          std::span<const int> y) {
    const auto stack = quantum_gram_stack(X, cfg);
    const LambdaWeights lw = compute_lambdas(stack, y);
    const Alignment a =
        centered_alignment(combine_kernels({stack, lw.lambda}), y);
    return a.value;
}

} // namespace

ThetaOptResult optimize_theta(const EmbeddingConfig &cfg,
                              const FeatureMatrix &X_train,
                              std::span<const int> y, int steps,
                              double step_size) {
    if (steps < 0 || !(step_size > 0.0))
        throw validation_error("optimize_theta needs steps >= 0 and a positive step size");

    ThetaOptResult result;
    result.config = cfg;
    double current = steps > 0 ? combined_alignment(result.config, X_train, y)
                               : 0.0;
    if (steps > 0) {
        if (!std::isfinite(current))
            throw validation_error("non-finite alignment at the starting point");
        result.alignment_trace.push_back(current);
    }

    const double fd_step = 1e-4; // central differences on each theta entry
    for (int step = 0; step < steps; ++step) {
        std::vector<double> grad(result.config.theta.size(), 0.0);
        EmbeddingConfig probe = result.config;
        for (std::size_t t = 0; t < probe.theta.size(); ++t) {
            const double saved = probe.theta[t];
            probe.theta[t] = saved + fd_step;
            const double hi = combined_alignment(probe, X_train, y);
            probe.theta[t] = saved - fd_step;
            const double lo = combined_alignment(probe, X_train, y);
            probe.theta[t] = saved;
            if (!std::isfinite(hi) || !std::isfinite(lo))
                throw validation_error("non-finite alignment in gradient probe");
            grad[t] = (hi - lo) / (2.0 * fd_step);
        }

        bool accepted = false;
        double scale = step_size;
        for (int attempt = 0; attempt < 12; ++attempt, scale *= 0.5) {
            EmbeddingConfig candidate = result.config;
            for (std::size_t t = 0; t < candidate.theta.size(); ++t)
                candidate.theta[t] += scale * grad[t];
            const double trial = combined_alignment(candidate, X_train, y);
            if (std::isfinite(trial) && trial > current) {
                result.config = std::move(candidate);
                current = trial;
                result.alignment_trace.push_back(current);
                ++result.accepted_steps;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break; // local optimum at this resolution
    }
    return result;
}

} // namespace lcq
