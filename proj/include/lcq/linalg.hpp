#pragma once

#include <cstddef>
#include <vector>

namespace lcq {

// Eigenvalues of a dense symmetric matrix (row major, m x m) via cyclic
// Jacobi rotations; returned ascending. Sized for the small Gram matrices
// used here, not for large problems.
std::vector<double> symmetric_eigenvalues(const double *a, std::size_t m);

double min_eigenvalue_sym(const double *a, std::size_t m);

} // namespace lcq
