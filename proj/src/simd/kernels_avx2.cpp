#include "lcq/simd.hpp"

// AVX2/FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma in
// its own translation unit; selected at runtime only when the host reports
// both features, so the rest of the library stays runnable on any x86-64.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>

namespace lcq::simd {
namespace {

inline std::size_t expand_bit(std::size_t s, std::size_t mask) {
    return ((s & ~(mask - 1)) << 1) | (s & (mask - 1));
}

// Per-lane complex multiply of v (two packed complex<double>) by constants
// broadcast in cre/cim. fmaddsub pairs the re/im sign pattern.
inline __m256d cmul(__m256d v, __m256d cre, __m256d cim) {
    const __m256d vswap = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(v, cre, _mm256_mul_pd(vswap, cim));
}

void apply_u2_avx2(cplx *a, std::size_t n, std::size_t mask, const cplx *u) {
    double *d = reinterpret_cast<double *>(a);
    const __m256d u00re = _mm256_set1_pd(u[0].real());
    const __m256d u00im = _mm256_set1_pd(u[0].imag());
    const __m256d u01re = _mm256_set1_pd(u[1].real());
    const __m256d u01im = _mm256_set1_pd(u[1].imag());
    const __m256d u10re = _mm256_set1_pd(u[2].real());
    const __m256d u10im = _mm256_set1_pd(u[2].imag());
    const __m256d u11re = _mm256_set1_pd(u[3].real());
    const __m256d u11im = _mm256_set1_pd(u[3].imag());

    if (mask >= 2) {
        // Both halves of each block are contiguous: two pairs per iteration.
        for (std::size_t base = 0; base < n; base += 2 * mask) {
            for (std::size_t off = 0; off < mask; off += 2) {
                double *p0 = d + 2 * (base + off);
                double *p1 = p0 + 2 * mask;
                const __m256d va = _mm256_loadu_pd(p0);
                const __m256d vb = _mm256_loadu_pd(p1);
                const __m256d na = _mm256_add_pd(cmul(va, u00re, u00im),
                                                 cmul(vb, u01re, u01im));
                const __m256d nb = _mm256_add_pd(cmul(va, u10re, u10im),
                                                 cmul(vb, u11re, u11im));
                _mm256_storeu_pd(p0, na);
                _mm256_storeu_pd(p1, nb);
            }
        }
        return;
    }

    // mask == 1: pair members interleave in memory. Deinterleave two pairs
    // across 128-bit lanes, transform, repack.
    if (n >= 4) {
        for (std::size_t i = 0; i < n; i += 4) {
            double *p = d + 2 * i;
            const __m256d r0 = _mm256_loadu_pd(p);     // (x0, y0)
            const __m256d r1 = _mm256_loadu_pd(p + 4); // (x1, y1)
            const __m256d va = _mm256_permute2f128_pd(r0, r1, 0x20);
            const __m256d vb = _mm256_permute2f128_pd(r0, r1, 0x31);
            const __m256d na = _mm256_add_pd(cmul(va, u00re, u00im),
                                             cmul(vb, u01re, u01im));
            const __m256d nb = _mm256_add_pd(cmul(va, u10re, u10im),
                                             cmul(vb, u11re, u11im));
            _mm256_storeu_pd(p, _mm256_permute2f128_pd(na, nb, 0x20));
            _mm256_storeu_pd(p + 4, _mm256_permute2f128_pd(na, nb, 0x31));
        }
        return;
    }

    // Single pair (n == 2).
    const cplx x = a[0];
    const cplx y = a[1];
    a[0] = u[0] * x + u[1] * y;
    a[1] = u[2] * x + u[3] * y;
}

void apply_u4_avx2(cplx *a, std::size_t n, std::size_t mask_a,
                   std::size_t mask_b, const cplx *u) {
    double *d = reinterpret_cast<double *>(a);
    const std::size_t lo = std::min(mask_a, mask_b);
    const std::size_t hi = std::max(mask_a, mask_b);
    const std::size_t groups = n / 4;

    // Coefficient vectors: rows (0,1) of u in the two lanes for out01,
    // rows (2,3) for out23, one vector pair per matrix column.
    __m256d cre01[4], cim01[4], cre23[4], cim23[4];
    for (int c = 0; c < 4; ++c) {
        cre01[c] = _mm256_set_pd(u[4 + c].real(), u[4 + c].real(), u[c].real(),
                                 u[c].real());
        cim01[c] = _mm256_set_pd(u[4 + c].imag(), u[4 + c].imag(), u[c].imag(),
                                 u[c].imag());
        cre23[c] = _mm256_set_pd(u[12 + c].real(), u[12 + c].real(),
                                 u[8 + c].real(), u[8 + c].real());
        cim23[c] = _mm256_set_pd(u[12 + c].imag(), u[12 + c].imag(),
                                 u[8 + c].imag(), u[8 + c].imag());
    }

    for (std::size_t s = 0; s < groups; ++s) {
        const std::size_t i = expand_bit(expand_bit(s, lo), hi);
        double *p0 = d + 2 * i;
        double *p1 = d + 2 * (i | mask_b);
        double *p2 = d + 2 * (i | mask_a);
        double *p3 = d + 2 * (i | mask_a | mask_b);

        const __m256d v01 = _mm256_set_m128d(_mm_loadu_pd(p1), _mm_loadu_pd(p0));
        const __m256d v23 = _mm256_set_m128d(_mm_loadu_pd(p3), _mm_loadu_pd(p2));
        const __m256d d0 = _mm256_permute2f128_pd(v01, v01, 0x00);
        const __m256d d1 = _mm256_permute2f128_pd(v01, v01, 0x11);
        const __m256d d2 = _mm256_permute2f128_pd(v23, v23, 0x00);
        const __m256d d3 = _mm256_permute2f128_pd(v23, v23, 0x11);

        __m256d out01 = cmul(d0, cre01[0], cim01[0]);
        out01 = _mm256_add_pd(out01, cmul(d1, cre01[1], cim01[1]));
        out01 = _mm256_add_pd(out01, cmul(d2, cre01[2], cim01[2]));
        out01 = _mm256_add_pd(out01, cmul(d3, cre01[3], cim01[3]));
        __m256d out23 = cmul(d0, cre23[0], cim23[0]);
        out23 = _mm256_add_pd(out23, cmul(d1, cre23[1], cim23[1]));
        out23 = _mm256_add_pd(out23, cmul(d2, cre23[2], cim23[2]));
        out23 = _mm256_add_pd(out23, cmul(d3, cre23[3], cim23[3]));

        _mm_storeu_pd(p0, _mm256_castpd256_pd128(out01));
        _mm_storeu_pd(p1, _mm256_extractf128_pd(out01, 1));
        _mm_storeu_pd(p2, _mm256_castpd256_pd128(out23));
        _mm_storeu_pd(p3, _mm256_extractf128_pd(out23, 1));
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double *x, const double *y, std::size_t d) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                              acc);
    double r = hsum(acc);
    for (; i < d; ++i)
        r += x[i] * y[i];
    return r;
}

double sqdist_avx2(const double *x, const double *y, std::size_t d) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        const __m256d t =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(t, t, acc);
    }
    double r = hsum(acc);
    for (; i < d; ++i) {
        const double t = x[i] - y[i];
        r += t * t;
    }
    return r;
}

void bloch_row_avx2(const double *bx, const double *by, const double *bz,
                    std::size_t m, double qx, double qy, double qz,
                    double *out) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    const __m256d vqz = _mm256_set1_pd(qz);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t s = 0;
    for (; s + 4 <= m; s += 4) {
        __m256d t = _mm256_fmadd_pd(vqx, _mm256_loadu_pd(bx + s), one);
        t = _mm256_fmadd_pd(vqy, _mm256_loadu_pd(by + s), t);
        t = _mm256_fmadd_pd(vqz, _mm256_loadu_pd(bz + s), t);
        _mm256_storeu_pd(out + s, _mm256_mul_pd(half, t));
    }
    for (; s < m; ++s)
        out[s] = 0.5 * (1.0 + qx * bx[s] + qy * by[s] + qz * bz[s]);
}

} // namespace

const Ops kAvx2Ops = {apply_u2_avx2, apply_u4_avx2, dot_avx2, sqdist_avx2,
                      bloch_row_avx2};

} // namespace lcq::simd

#endif // __AVX2__ && __FMA__
