#pragma once

#include <array>
#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "lcq/errors.hpp"

namespace lcq {

using cplx = std::complex<double>;

// Dense amplitudes only; 2^12 doubles is the deliberate ceiling.
inline constexpr int kMaxQubits = 12;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kDensityTol = 1e-10;

// 2x2 complex matrix, row major.
struct Unitary2 {
    std::array<cplx, 4> m{};

    cplx at(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }
    cplx &at(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }

    // max |(U U†)_{rc} - I_{rc}|
    double unitarity_defect() const;
};

// 4x4 complex matrix, row major. Basis order: the first qubit of the pair is
// the high bit, the second the low bit.
struct Unitary4 {
    std::array<cplx, 16> m{};

    cplx at(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }
    cplx &at(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }

    double unitarity_defect() const;
};

Unitary2 identity2();
Unitary2 pauli_x();
Unitary2 hadamard();
Unitary2 rotation_y(double angle);
Unitary4 controlled_z();
Unitary4 cnot(); // first qubit of the pair controls
Unitary4 kron(const Unitary2 &a, const Unitary2 &b);
Unitary4 matmul(const Unitary4 &a, const Unitary4 &b);

struct SingleGate {
    Unitary2 u;
    int target; // 1-based
};

struct TwoGate {
    Unitary4 u;
    int a; // high bit of the gate basis, 1-based
    int b; // low bit, 1-based, != a
};

using Gate = std::variant<SingleGate, TwoGate>;

// Ordered gate list over n qubits, applied to |0...0>.
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    explicit Circuit(int qubits);
    void add(const Unitary2 &u, int target);
    void add(const Unitary4 &u, int a, int b);
};

// Dense state vector over n qubits. Bit convention used throughout: qubit 1
// is the most significant bit of the amplitude index, qubit n the least.
class StateVector {
  public:
    explicit StateVector(int n); // |0...0>
    StateVector(int n, std::vector<cplx> amplitudes);

    int qubit_count() const { return n_; }
    std::size_t size() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(std::size_t i) const { return amps_[i]; }
    double norm_sq() const;

    // In-place gate application. Two-qubit form accepts any (a, b) with
    // a != b, adjacency not required; a maps to the high bit of the gate
    // basis.
    void apply(const Unitary2 &u, int target);
    void apply(const Unitary4 &u, int a, int b);

  private:
    int n_;
    std::vector<cplx> amps_;
};

// One-qubit reduced state, row major.
struct DensityMatrix2 {
    std::array<cplx, 4> m{};

    cplx at(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }
    cplx &at(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }

    cplx trace() const { return m[0] + m[3]; }
    double purity() const; // Tr[rho^2]
    double hermiticity_defect() const;

    // rho = (I + x sx + y sy + z sz) / 2; returns (x, y, z).
    std::array<double, 3> bloch() const;
};

// Value-semantics operation set. Gate application returns a transformed
// copy; hot loops should use StateVector::apply / run_circuit instead.
StateVector apply_single(const StateVector &state, const Unitary2 &u,
                         int target);
StateVector apply_two(const StateVector &state, const Unitary4 &u, int a,
                      int b);
StateVector run_circuit(const Circuit &c);

// Partial trace of |psi><psi| over all qubits except the given one.
DensityMatrix2 reduced_density(const StateVector &state, int qubit);

// Tr[a b] for one-qubit density matrices; real for Hermitian inputs, the
// imaginary residue is checked (validation mode) and discarded.
double trace_product(const DensityMatrix2 &a, const DensityMatrix2 &b);

} // namespace lcq
