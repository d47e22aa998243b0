#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcq/qsim.hpp"

namespace lcq {

// Pluggable (V, U) block definitions for the re-uploading circuit. v maps
// one feature angle to the per-qubit upload gate; u maps params_per_block
// angles to the entangling block (first qubit of the pair on the high bit).
struct GateFamily {
    std::string id;
    int params_per_block;
    Unitary2 (*v)(double angle);
    Unitary4 (*u)(const double *theta);
};

// Lookup by identifier; throws validation_error for unknown ids. The default
// family "ry-cz" uses V(x) = RY(x) and U(t0, t1) = (RY(t0) x RY(t1)) * CZ,
// i.e. a controlled-Z followed by one Y rotation per pair member.
const GateFamily &gate_family(const std::string &id);

// Brickwork geometry: n qubits, `layers` alternating brick layers.
// Layer l (1-based) pairs:
//   odd l:  (1,2), (3,4), ..., (n-1,n)
//   even l: (2,3), (4,5), ..., (n-2,n-1), (n,1)
struct BrickworkLayout {
    int n = 0;
    int layers = 0;

    std::vector<std::pair<int, int>> pairs(int layer) const;
};

struct EmbeddingConfig {
    int n = 8;      // qubit count == feature count; even, >= 2
    int layers = 4; // re-upload depth L
    std::string family = "ry-cz";
    std::uint64_t theta_seed = 0;
    std::vector<double> theta; // [layers][n/2][params_per_block], row major

    // Fresh config with theta drawn i.i.d. uniform on [0, 2*pi).
    static EmbeddingConfig random(int n, int layers, std::uint64_t seed,
                                  const std::string &family = "ry-cz");

    BrickworkLayout layout() const { return BrickworkLayout{n, layers}; }
    std::size_t theta_size() const;
    // layer, block 0-based
    const double *theta_block(int layer, int block) const;
    void validate() const;
};

// Re-upload counts: w(i, j) = number of layers whose upload of feature j
// lies inside the backward light-cone of the measurement on qubit i.
struct LightconeWeights {
    int n = 0;
    int layers = 0;
    std::vector<int> w; // n*n, row per measured qubit

    int at(int i, int j) const { // 1-based
        return w[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(j - 1)];
    }
    std::vector<int> row(int i) const;
};

struct ImportanceScores {
    std::vector<double> p; // simplex-normalized, one entry per feature
};

// The embedding circuit for one scaled feature vector x (angles in [0, pi]):
// for each layer, V(x_i) on every qubit, then the layer's entangling bricks.
Circuit build_embedding_circuit(const EmbeddingConfig &cfg,
                                std::span<const double> x);

// Backward cone walk, top layer down: absorb the layer's bricks that touch
// the cone first, then count that layer's uploads of every qubit in the
// cone. This ordering is pinned by the golden row test in the suite.
LightconeWeights lightcone_weights(const BrickworkLayout &layout);

// P_j proportional to sum_i w(i, j) * lambda_i, normalized to sum to one.
ImportanceScores importance_scores(const LightconeWeights &w,
                                   std::span<const double> lambda);

} // namespace lcq
