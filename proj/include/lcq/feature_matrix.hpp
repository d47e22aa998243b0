#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lcq/errors.hpp"

namespace lcq {

// Row-major sample-by-feature matrix with optional per-row identifiers.
struct FeatureMatrix {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<double> x; // count * dim
    std::vector<std::string> ids;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t count_, std::size_t dim_)
        : count(count_), dim(dim_), x(count_ * dim_, 0.0) {}

    const double *row(std::size_t i) const { return x.data() + i * dim; }
    double *row(std::size_t i) { return x.data() + i * dim; }
    std::span<const double> row_span(std::size_t i) const {
        return {row(i), dim};
    }
    double &at(std::size_t i, std::size_t j) { return x[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return x[i * dim + j]; }
};

} // namespace lcq
