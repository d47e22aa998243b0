#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lcq/embedding.hpp"
#include "lcq/feature_matrix.hpp"

namespace lcq {

// Dense real Gram matrix, row major, with optional sample identifiers.
struct GramMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;

    GramMatrix() = default;
    GramMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double &at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    bool square() const { return rows == cols; }
    double symmetry_defect() const; // max |K_rc - K_cr| (square only)
};

// Per-qubit local Gram matrices plus their combination weights.
struct KernelStack {
    std::vector<GramMatrix> k;
    std::vector<double> lambda;
};

struct Alignment {
    double value = 0.0;
    bool degenerate = false; // centering annihilated one of the matrices
};

struct LambdaWeights {
    std::vector<double> lambda;
    std::vector<Alignment> alignments;
    bool uniform_fallback = false; // no local kernel aligned positively
};

// One-qubit reduced states of every embedded sample, stored as Bloch
// vectors in per-qubit SoA layout: component arrays are indexed
// [qubit-1]*count + sample. This is the cache the Gram row kernels read.
struct EmbeddingCache {
    int n = 0;
    std::size_t count = 0;
    std::vector<double> bx, by, bz;
    std::vector<std::string> ids;

    const double *qubit_bx(int qubit) const {
        return bx.data() + static_cast<std::size_t>(qubit - 1) * count;
    }
    const double *qubit_by(int qubit) const {
        return by.data() + static_cast<std::size_t>(qubit - 1) * count;
    }
    const double *qubit_bz(int qubit) const {
        return bz.data() + static_cast<std::size_t>(qubit - 1) * count;
    }
};

// Runs the embedding circuit once per sample and caches all n reduced
// one-qubit states. X rows must already be scaled to the angle range.
EmbeddingCache embed_samples(const EmbeddingConfig &cfg,
                             const FeatureMatrix &X);

// Local Gram stack K_i[a][b] = Tr[rho^i_a rho^i_b]. The square overload
// mirrors the upper triangle so the result is exactly symmetric.
std::vector<GramMatrix> quantum_gram_stack(const EmbeddingCache &samples);
std::vector<GramMatrix> quantum_gram_stack(const EmbeddingCache &rows,
                                           const EmbeddingCache &cols);

// Convenience: embed + stack in one call.
std::vector<GramMatrix> quantum_gram_stack(const FeatureMatrix &X,
                                           const EmbeddingConfig &cfg);

// Centered kernel alignment between K and the label Gram y*y^T:
// <HKH, HYH>_F / (||HKH||_F ||HYH||_F) with H = I - 1/m. Labels are +-1.
Alignment centered_alignment(const GramMatrix &k, std::span<const int> y);

// lambda_i = max(A_i, 0) / sum_k max(A_k, 0); uniform fallback (flagged)
// when no alignment is positive, which also keeps the combination PSD.
LambdaWeights compute_lambdas(const std::vector<GramMatrix> &stack,
                              std::span<const int> y);

// Entrywise convex combination sum_i lambda_i K_i.
GramMatrix combine_kernels(const KernelStack &stack);

GramMatrix linear_gram(const FeatureMatrix &xa, const FeatureMatrix &xb);
GramMatrix rbf_gram(const FeatureMatrix &xa, const FeatureMatrix &xb,
                    double gamma);

// Matches sklearn-style "scale": 1 / (dim * variance of all entries).
double rbf_gamma_auto(const FeatureMatrix &x);

// Plain-text export of a square Gram stack: header line "m n_kernels",
// then each kernel as m rows of space-separated full-precision decimals.
void export_gram_stack(std::ostream &out, const std::vector<GramMatrix> &stack);
std::vector<GramMatrix> import_gram_stack(std::istream &in);

struct ThetaOptResult {
    EmbeddingConfig config;
    std::vector<double> alignment_trace; // initial value plus accepted steps
    int accepted_steps = 0;
};

// Finite-difference ascent on the centered alignment of the combined
// kernel over the training set. Off the default path; steps = 0 is a no-op.
// A step is accepted only if it improves the alignment; the step size is
// halved on rejection before giving up on that iteration.
ThetaOptResult optimize_theta(const EmbeddingConfig &cfg,
                              const FeatureMatrix &X_train,
                              std::span<const int> y, int steps,
                              double step_size);

} // namespace lcq
