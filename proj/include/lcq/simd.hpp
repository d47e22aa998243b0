#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace lcq::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// Inner-loop kernel table. Every entry has a scalar reference
// implementation; vector variants must agree with it to round-off and are
// equivalence-tested in tests/test_simd.cpp.
//
// apply_u2: in-place 2x2 complex update over amplitude pairs (i, i|mask).
// apply_u4: in-place 4x4 complex update over amplitude quads; mask_a selects
//           the qubit mapped to the high bit of the gate basis, mask_b the
//           low bit. mask_a != mask_b, both single-bit, both < n_amps.
// dot:      plain dot product of two length-d arrays.
// sqdist:   squared Euclidean distance of two length-d arrays.
// bloch_row: out[s] = 0.5 * (1 + qx*bx[s] + qy*by[s] + qz*bz[s]); the
//           Gram-row kernel for one-qubit states in Bloch form.
struct Ops {
    void (*apply_u2)(cplx *amps, std::size_t n_amps, std::size_t mask,
                     const cplx *u);
    void (*apply_u4)(cplx *amps, std::size_t n_amps, std::size_t mask_a,
                     std::size_t mask_b, const cplx *u);
    double (*dot)(const double *x, const double *y, std::size_t d);
    double (*sqdist)(const double *x, const double *y, std::size_t d);
    void (*bloch_row)(const double *bx, const double *by, const double *bz,
                      std::size_t m, double qx, double qy, double qz,
                      double *out);
};

// Active kernel table. Selected once at startup: the best backend the host
// supports, overridable with the LCQ_SIMD environment variable
// ("scalar" or "avx2") or force().
const Ops &ops();

Backend active();
bool supported(Backend b);
Backend best();

// Switch backends at runtime; returns false (and leaves the selection
// unchanged) if the host does not support the request.
bool force(Backend b);

std::string_view name(Backend b);

} // namespace lcq::simd
