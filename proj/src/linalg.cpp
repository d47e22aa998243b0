#include "lcq/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace lcq {

std::vector<double> symmetric_eigenvalues(const double *a, std::size_t m) {
    std::vector<double> w(a, a + m * m);
    const auto at = [&](std::size_t r, std::size_t c) -> double & {
        return w[r * m + c];
    };

    // symmetrize to protect against round-off asymmetry in the input
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c) {
            const double v = 0.5 * (at(r, c) + at(c, r));
            at(r, c) = v;
            at(c, r) = v;
        }

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = r + 1; c < m; ++c)
                off += at(r, c) * at(r, c);
        if (off < 1e-26)
            break;

        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300)
                    continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(m);
    for (std::size_t r = 0; r < m; ++r)
        eig[r] = at(r, r);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double min_eigenvalue_sym(const double *a, std::size_t m) {
    return symmetric_eigenvalues(a, m).front();
}

} // namespace lcq
