#include "lcq/qsim.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "lcq/simd.hpp"

namespace lcq {

namespace {

std::atomic<bool> g_validation{
#ifdef NDEBUG
    false
#else
    true
#endif
};

std::size_t qubit_mask(int n, int qubit) {
    // qubit 1 = most significant bit of the amplitude index
    return std::size_t{1} << (n - qubit);
}

void check_qubit(int n, int qubit, const char *what) {
    if (qubit < 1 || qubit > n)
        throw index_error(std::string(what) + " qubit " + std::to_string(qubit) +
                          " out of range 1.." + std::to_string(n));
}

void check_unitary2(const Unitary2 &u) {
    if (validation_enabled() && u.unitarity_defect() > kUnitaryTol)
        throw validation_error("2x2 gate is not unitary within tolerance");
}

void check_unitary4(const Unitary4 &u) {
    if (validation_enabled() && u.unitarity_defect() > kUnitaryTol)
        throw validation_error("4x4 gate is not unitary within tolerance");
}

} // namespace

void set_validation(bool on) { g_validation.store(on, std::memory_order_relaxed); }
bool validation_enabled() { return g_validation.load(std::memory_order_relaxed); }

double Unitary2::unitarity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < 2; ++k)
                s += at(r, k) * std::conj(at(c, k));
            if (r == c)
                s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

double Unitary4::unitarity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += at(r, k) * std::conj(at(c, k));
            if (r == c)
                s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

Unitary2 identity2() { return Unitary2{{1.0, 0.0, 0.0, 1.0}}; }

Unitary2 pauli_x() { return Unitary2{{0.0, 1.0, 1.0, 0.0}}; }

Unitary2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return Unitary2{{s, s, s, -s}};
}

Unitary2 rotation_y(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return Unitary2{{c, -s, s, c}};
}

Unitary4 controlled_z() {
    Unitary4 u;
    u.at(0, 0) = 1.0;
    u.at(1, 1) = 1.0;
    u.at(2, 2) = 1.0;
    u.at(3, 3) = -1.0;
    return u;
}

Unitary4 cnot() {
    Unitary4 u;
    u.at(0, 0) = 1.0;
    u.at(1, 1) = 1.0;
    u.at(2, 3) = 1.0;
    u.at(3, 2) = 1.0;
    return u;
}

Unitary4 kron(const Unitary2 &a, const Unitary2 &b) {
    Unitary4 u;
    for (int ra = 0; ra < 2; ++ra)
        for (int ca = 0; ca < 2; ++ca)
            for (int rb = 0; rb < 2; ++rb)
                for (int cb = 0; cb < 2; ++cb)
                    u.at(ra * 2 + rb, ca * 2 + cb) = a.at(ra, ca) * b.at(rb, cb);
    return u;
}

Unitary4 matmul(const Unitary4 &a, const Unitary4 &b) {
    Unitary4 u;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += a.at(r, k) * b.at(k, c);
            u.at(r, c) = s;
        }
    return u;
}

Circuit::Circuit(int qubits) : n(qubits) {
    if (n < 1 || n > kMaxQubits)
        throw validation_error("circuit qubit count must be in 1.." +
                               std::to_string(kMaxQubits));
}

void Circuit::add(const Unitary2 &u, int target) {
    check_qubit(n, target, "gate target");
    gates.push_back(SingleGate{u, target});
}

void Circuit::add(const Unitary4 &u, int a, int b) {
    check_qubit(n, a, "gate target");
    check_qubit(n, b, "gate target");
    if (a == b)
        throw validation_error("two-qubit gate needs distinct qubits");
    gates.push_back(TwoGate{u, a, b});
}

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits)
        throw validation_error("qubit count must be in 1.." +
                               std::to_string(kMaxQubits));
    amps_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<cplx> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
    if (n < 1 || n > kMaxQubits)
        throw validation_error("qubit count must be in 1.." +
                               std::to_string(kMaxQubits));
    if (amps_.size() != (std::size_t{1} << n))
        throw validation_error("amplitude count must be 2^n");
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx &a : amps_)
        s += std::norm(a);
    return s;
}

void StateVector::apply(const Unitary2 &u, int target) {
    check_qubit(n_, target, "gate target");
    check_unitary2(u);
    simd::ops().apply_u2(amps_.data(), amps_.size(), qubit_mask(n_, target),
                         u.m.data());
}

void StateVector::apply(const Unitary4 &u, int a, int b) {
    check_qubit(n_, a, "gate target");
    check_qubit(n_, b, "gate target");
    if (a == b)
        throw validation_error("two-qubit gate needs distinct qubits");
    check_unitary4(u);
    simd::ops().apply_u4(amps_.data(), amps_.size(), qubit_mask(n_, a),
                         qubit_mask(n_, b), u.m.data());
}

double DensityMatrix2::purity() const {
    // Tr[rho^2] = sum_{rc} rho_rc rho_cr; real for Hermitian rho
    cplx s = m[0] * m[0] + m[1] * m[2] + m[2] * m[1] + m[3] * m[3];
    return s.real();
}

double DensityMatrix2::hermiticity_defect() const {
    double worst = std::abs(m[0].imag());
    worst = std::max(worst, std::abs(m[3].imag()));
    worst = std::max(worst, std::abs(m[1] - std::conj(m[2])));
    return worst;
}

std::array<double, 3> DensityMatrix2::bloch() const {
    return {2.0 * m[1].real(), -2.0 * m[1].imag(), (m[0] - m[3]).real()};
}

StateVector apply_single(const StateVector &state, const Unitary2 &u,
                         int target) {
    StateVector out = state;
    out.apply(u, target);
    return out;
}

StateVector apply_two(const StateVector &state, const Unitary4 &u, int a,
                      int b) {
    StateVector out = state;
    out.apply(u, a, b);
    return out;
}

StateVector run_circuit(const Circuit &c) {
    StateVector state(c.n);
    for (const Gate &g : c.gates) {
        if (const auto *s = std::get_if<SingleGate>(&g))
            state.apply(s->u, s->target);
        else
            state.apply(std::get<TwoGate>(g).u, std::get<TwoGate>(g).a,
                        std::get<TwoGate>(g).b);
    }
    return state;
}

DensityMatrix2 reduced_density(const StateVector &state, int qubit) {
    const int n = state.qubit_count();
    check_qubit(n, qubit, "reduced density");
    const std::size_t mask = qubit_mask(n, qubit);
    const auto amps = state.amplitudes();

    double r00 = 0.0, r11 = 0.0;
    cplx r01 = 0.0;
    for (std::size_t base = 0; base < amps.size(); base += 2 * mask) {
        for (std::size_t off = 0; off < mask; ++off) {
            const cplx a = amps[base + off];        // qubit bit = 0
            const cplx b = amps[base + off + mask]; // qubit bit = 1
            r00 += std::norm(a);
            r11 += std::norm(b);
            r01 += a * std::conj(b);
        }
    }

    DensityMatrix2 rho;
    rho.m[0] = r00;
    rho.m[1] = r01;
    rho.m[2] = std::conj(r01);
    rho.m[3] = r11;
    if (validation_enabled()) {
        if (std::abs(rho.trace() - 1.0) > kDensityTol)
            throw validation_error("reduced density trace deviates from 1");
        if (rho.hermiticity_defect() > kDensityTol)
            throw validation_error("reduced density is not Hermitian");
    }
    return rho;
}

double trace_product(const DensityMatrix2 &a, const DensityMatrix2 &b) {
    cplx s = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            s += a.at(r, c) * b.at(c, r);
    if (validation_enabled() && std::abs(s.imag()) > kDensityTol)
        throw validation_error("trace product has a non-real residue");
    return s.real();
}

} // namespace lcq
