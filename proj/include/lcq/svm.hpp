#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lcq/kernels.hpp"

namespace lcq {

// Dual model for a C-SVM over a precomputed kernel.
struct SvmModel {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<std::size_t> support; // indices with alpha > 0
    double C = 1.0;
    std::vector<int> y; // training labels, +-1
    std::vector<std::string> sample_ids;
    bool converged = true;
    int iterations = 0;
};

struct Prediction {
    std::vector<int> labels; // +-1; ties (decision == 0) go to -1
    std::vector<double> decision;
};

// SMO over the most-violating pair. K must be symmetric (tolerance 1e-8)
// and PSD up to -1e-8 on its smallest eigenvalue; both classes must be
// present. Stops when the maximal KKT violation drops below tol; if
// max_passes pair updates do not get there, the model is returned with
// converged = false.
SvmModel train_precomputed(const GramMatrix &K, std::span<const int> y,
                           double C = 1.0, double tol = 1e-4,
                           int max_passes = 10000);

// decision(t) = sum_i alpha_i y_i K(t, i) + bias over the columns of
// K_test_train, which must be ordered like the model's training samples.
Prediction predict(const SvmModel &model, const GramMatrix &K_test_train);

// Dual objective W(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const GramMatrix &K, std::span<const int> y,
                      std::span<const double> alphas);

// Plain-text model record for reproducibility audits.
void save_model(std::ostream &out, const SvmModel &model);
SvmModel load_model(std::istream &in);

} // namespace lcq
