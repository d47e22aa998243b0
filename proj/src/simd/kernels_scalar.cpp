#include "lcq/simd.hpp"

#include <algorithm>

// Scalar reference kernels. These define the semantics that the vector
// backends are tested against.

namespace lcq::simd {
namespace {

// Insert a zero bit at the position selected by `mask` (a single-bit mask),
// shifting higher bits left by one.
inline std::size_t expand_bit(std::size_t s, std::size_t mask) {
    return ((s & ~(mask - 1)) << 1) | (s & (mask - 1));
}

void apply_u2_scalar(cplx *a, std::size_t n, std::size_t mask, const cplx *u) {
    for (std::size_t base = 0; base < n; base += 2 * mask) {
        for (std::size_t off = 0; off < mask; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + mask;
            const cplx x = a[i0];
            const cplx y = a[i1];
            a[i0] = u[0] * x + u[1] * y;
            a[i1] = u[2] * x + u[3] * y;
        }
    }
}

void apply_u4_scalar(cplx *a, std::size_t n, std::size_t mask_a,
                     std::size_t mask_b, const cplx *u) {
    const std::size_t lo = std::min(mask_a, mask_b);
    const std::size_t hi = std::max(mask_a, mask_b);
    const std::size_t groups = n / 4;
    for (std::size_t s = 0; s < groups; ++s) {
        const std::size_t i = expand_bit(expand_bit(s, lo), hi);
        const std::size_t g1 = i | mask_b;
        const std::size_t g2 = i | mask_a;
        const std::size_t g3 = i | mask_a | mask_b;
        const cplx x0 = a[i];
        const cplx x1 = a[g1];
        const cplx x2 = a[g2];
        const cplx x3 = a[g3];
        a[i] = u[0] * x0 + u[1] * x1 + u[2] * x2 + u[3] * x3;
        a[g1] = u[4] * x0 + u[5] * x1 + u[6] * x2 + u[7] * x3;
        a[g2] = u[8] * x0 + u[9] * x1 + u[10] * x2 + u[11] * x3;
        a[g3] = u[12] * x0 + u[13] * x1 + u[14] * x2 + u[15] * x3;
    }
}

double dot_scalar(const double *x, const double *y, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        acc += x[i] * y[i];
    return acc;
}

double sqdist_scalar(const double *x, const double *y, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = x[i] - y[i];
        acc += t * t;
    }
    return acc;
}

void bloch_row_scalar(const double *bx, const double *by, const double *bz,
                      std::size_t m, double qx, double qy, double qz,
                      double *out) {
    for (std::size_t s = 0; s < m; ++s)
        out[s] = 0.5 * (1.0 + qx * bx[s] + qy * by[s] + qz * bz[s]);
}

} // namespace

const Ops kScalarOps = {apply_u2_scalar, apply_u4_scalar, dot_scalar,
                        sqdist_scalar, bloch_row_scalar};

} // namespace lcq::simd
