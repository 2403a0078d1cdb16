#include "rgs/trellis.hpp"

#include <stdexcept>

namespace rgs {

std::size_t TrellisGraph::total_vertices() const {
    std::size_t n = 0;
    for (std::size_t s : layer_sizes) {
        n += s;
    }
    return n;
}

std::size_t TrellisGraph::layer_offset(std::size_t a) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < a; ++i) {
        off += layer_sizes[i];
    }
    return off;
}

namespace {

void check_factorization(const GammaFactorization& fac) {
    if (fac.gammas.size() < 2) {
        throw std::invalid_argument("factorization needs at least two layers");
    }
    for (const auto& g : fac.gammas) {
        if (g.rows() != fac.k) {
            throw std::invalid_argument("factorization: gamma row count != k");
        }
        if (g.rank() != fac.k) {
            throw std::invalid_argument("factorization: gamma is rank deficient");
        }
    }
}

} // namespace

TrellisGraph build_ltg(const GammaFactorization& fac) {
    check_factorization(fac);
    TrellisGraph ltg;
    for (const auto& g : fac.gammas) {
        ltg.layer_sizes.push_back(g.cols());
    }
    for (std::size_t a = 0; a + 1 < fac.gammas.size(); ++a) {
        ltg.betas.push_back(fac.gammas[a].transposed() * fac.gammas[a + 1]);
    }
    return ltg;
}

BitMatrix ltg_adjacency(const TrellisGraph& ltg) {
    std::size_t n = ltg.total_vertices();
    BitMatrix adj(n, n);
    for (std::size_t a = 0; a < ltg.betas.size(); ++a) {
        std::size_t off_a = ltg.layer_offset(a);
        std::size_t off_b = ltg.layer_offset(a + 1);
        const BitMatrix& beta = ltg.betas[a];
        if (beta.rows() != ltg.layer_sizes[a] || beta.cols() != ltg.layer_sizes[a + 1]) {
            throw std::invalid_argument("ltg_adjacency: beta dimensions mismatch layers");
        }
        for (std::size_t i = 0; i < beta.rows(); ++i) {
            for (std::size_t j = 0; j < beta.cols(); ++j) {
                if (beta.get(i, j)) {
                    adj.set(off_a + i, off_b + j, true);
                    adj.set(off_b + j, off_a + i, true);
                }
            }
        }
    }
    return adj;
}

Theorem1Transform theorem1_transform(const GammaFactorization& fac) {
    check_factorization(fac);
    Theorem1Transform out;
    GammaFactorization canonical;
    canonical.k = fac.k;
    for (const auto& gamma : fac.gammas) {
        auto norm = normalize_gamma(gamma);
        std::vector<LayerCnot> cnots;
        cnots.reserve(norm.steps.size());
        // A column step XORing source into target realizes, on the Z block,
        // the gate CNOT(control = target, target = source).
        for (const auto& step : norm.steps) {
            cnots.push_back({step.target, step.source});
        }
        out.layer_cnots.push_back(std::move(cnots));
        BitMatrix id_k(fac.k, gamma.cols());
        for (std::size_t i = 0; i < fac.k; ++i) {
            id_k.set(i, i, true);
        }
        canonical.gammas.push_back(std::move(id_k));
    }
    out.target = build_ltg(canonical);
    return out;
}

bool verify_equivalence(const TrellisGraph& ltg,
                        const std::vector<std::vector<LayerCnot>>& layer_cnots,
                        const TrellisGraph& target) {
    if (ltg.layer_sizes != target.layer_sizes) {
        throw std::invalid_argument("verify_equivalence: layer structures differ");
    }
    if (layer_cnots.size() != ltg.n_layers()) {
        throw std::invalid_argument("verify_equivalence: need one CNOT list per layer");
    }
    Tableau t = Tableau::graph_state(ltg_adjacency(ltg));
    for (std::size_t a = 0; a < layer_cnots.size(); ++a) {
        std::size_t off = ltg.layer_offset(a);
        std::size_t size = ltg.layer_sizes[a];
        for (const auto& gate : layer_cnots[a]) {
            if (gate.control >= size || gate.target >= size) {
                throw std::invalid_argument("verify_equivalence: CNOT crosses layers");
            }
            t.apply_cnot(off + gate.control, off + gate.target);
        }
    }
    Tableau want = Tableau::graph_state(ltg_adjacency(target));
    return t.canonical_stabilizers() == want.canonical_stabilizers();
}

std::optional<BitVec> transversal_decode(const BitVec& x_layer, const BitMatrix& gt) {
    return solve_left(gt, x_layer);
}

} // namespace rgs
