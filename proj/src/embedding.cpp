#include "lcq/embedding.hpp"

#include <cmath>

#include "lcq/rng.hpp"

namespace lcq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Unitary4 ry_cz_block(const double *theta) {
    return matmul(kron(rotation_y(theta[0]), rotation_y(theta[1])),
                  controlled_z());
}

const GateFamily kRyCz{"ry-cz", 2, rotation_y, ry_cz_block};

} // namespace

const GateFamily &gate_family(const std::string &id) {
    if (id == kRyCz.id)
        return kRyCz;
    throw validation_error("unknown gate family: " + id);
}

std::vector<std::pair<int, int>> BrickworkLayout::pairs(int layer) const {
    if (layer < 1 || layer > layers)
        throw index_error("layer out of range");
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(n / 2));
    if (layer % 2 == 1) {
        for (int q = 1; q + 1 <= n; q += 2)
            out.emplace_back(q, q + 1);
    } else {
        for (int q = 2; q + 1 <= n; q += 2)
            out.emplace_back(q, q + 1);
        out.emplace_back(n, 1); // wrap-around brick
    }
    return out;
}

EmbeddingConfig EmbeddingConfig::random(int n, int layers, std::uint64_t seed,
                                        const std::string &family) {
    EmbeddingConfig cfg;
    cfg.n = n;
    cfg.layers = layers;
    cfg.family = family;
    cfg.theta_seed = seed;
    cfg.validate();
    Rng rng(seed);
    cfg.theta.resize(cfg.theta_size());
    for (double &t : cfg.theta)
        t = rng.uniform(0.0, kTwoPi);
    return cfg;
}

std::size_t EmbeddingConfig::theta_size() const {
    const GateFamily &fam = gate_family(family);
    return static_cast<std::size_t>(layers) * static_cast<std::size_t>(n / 2) *
           static_cast<std::size_t>(fam.params_per_block);
}

const double *EmbeddingConfig::theta_block(int layer, int block) const {
    const GateFamily &fam = gate_family(family);
    const std::size_t idx =
        (static_cast<std::size_t>(layer) * static_cast<std::size_t>(n / 2) +
         static_cast<std::size_t>(block)) *
        static_cast<std::size_t>(fam.params_per_block);
    return theta.data() + idx;
}

void EmbeddingConfig::validate() const {
    if (n < 2 || n % 2 != 0)
        throw validation_error("embedding needs an even qubit count >= 2");
    if (n > kMaxQubits)
        throw validation_error("embedding qubit count exceeds simulator limit");
    if (layers < 1)
        throw validation_error("embedding needs at least one layer");
    for (double t : theta)
        if (!std::isfinite(t))
            throw validation_error("theta entries must be finite");
}

Circuit build_embedding_circuit(const EmbeddingConfig &cfg,
                                std::span<const double> x) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(cfg.n))
        throw validation_error("feature vector length must match qubit count");
    if (cfg.theta.size() != cfg.theta_size())
        throw validation_error("theta tensor has the wrong size");

    const GateFamily &fam = gate_family(cfg.family);
    const BrickworkLayout layout = cfg.layout();
    Circuit circuit(cfg.n);
    for (int layer = 1; layer <= cfg.layers; ++layer) {
        for (int q = 1; q <= cfg.n; ++q)
            circuit.add(fam.v(x[static_cast<std::size_t>(q - 1)]), q);
        const auto pairs = layout.pairs(layer);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const Unitary4 u =
                fam.u(cfg.theta_block(layer - 1, static_cast<int>(k)));
            circuit.add(u, pairs[k].first, pairs[k].second);
        }
    }
    return circuit;
}

LightconeWeights lightcone_weights(const BrickworkLayout &layout) {
    if (layout.n < 2 || layout.n % 2 != 0 || layout.layers < 1)
        throw validation_error("invalid brickwork layout");

    const int n = layout.n;
    LightconeWeights out;
    out.n = n;
    out.layers = layout.layers;
    out.w.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);

    for (int i = 1; i <= n; ++i) {
        std::vector<char> cone(static_cast<std::size_t>(n) + 1, 0);
        cone[static_cast<std::size_t>(i)] = 1;
        for (int layer = layout.layers; layer >= 1; --layer) {
            // absorb this layer's bricks into the cone, then count its uploads
            for (const auto &[a, b] : layout.pairs(layer)) {
                if (cone[static_cast<std::size_t>(a)] ||
                    cone[static_cast<std::size_t>(b)]) {
                    cone[static_cast<std::size_t>(a)] = 1;
                    cone[static_cast<std::size_t>(b)] = 1;
                }
            }
            for (int j = 1; j <= n; ++j)
                if (cone[static_cast<std::size_t>(j)])
                    ++out.w[static_cast<std::size_t>(i - 1) *
                                static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(j - 1)];
        }
    }
    return out;
}

std::vector<int> LightconeWeights::row(int i) const {
    if (i < 1 || i > n)
        throw index_error("weight row out of range");
    const auto *base = w.data() + static_cast<std::size_t>(i - 1) *
                                      static_cast<std::size_t>(n);
    return std::vector<int>(base, base + n);
}

ImportanceScores importance_scores(const LightconeWeights &w,
                                   std::span<const double> lambda) {
    const int n = w.n;
    if (lambda.size() != static_cast<std::size_t>(n))
        throw validation_error("lambda length must match qubit count");
    double lam_sum = 0.0;
    for (double l : lambda) {
        if (l < 0.0)
            throw validation_error("lambda entries must be non-negative");
        lam_sum += l;
    }
    if (std::abs(lam_sum - 1.0) > 1e-8)
        throw validation_error("lambda must sum to one");

    ImportanceScores scores;
    scores.p.assign(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i)
            s += static_cast<double>(w.at(i, j)) *
                 lambda[static_cast<std::size_t>(i - 1)];
        scores.p[static_cast<std::size_t>(j - 1)] = s;
        total += s;
    }
    if (total <= 0.0)
        throw validation_error("importance scores are identically zero");
    for (double &p : scores.p)
        p /= total;
    return scores;
}

} // namespace lcq
