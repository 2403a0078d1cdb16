#pragma once

#include <cstddef>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/tableau.hpp"

namespace rgs {

// Layered graph with edges only between adjacent layers, given by the
// biadjacency sequence betas[a] : layer_sizes[a] x layer_sizes[a+1].
struct TrellisGraph {
    std::vector<std::size_t> layer_sizes;
    std::vector<BitMatrix> betas;

    std::size_t n_layers() const { return layer_sizes.size(); }
    std::size_t total_vertices() const;
    std::size_t layer_offset(std::size_t a) const;
    bool operator==(const TrellisGraph&) const = default;
};

// Full-row-rank factors gamma_a with betas[a] = gamma_a^T gamma_{a+1}.
struct GammaFactorization {
    std::size_t k = 0;
    std::vector<BitMatrix> gammas;
};

TrellisGraph build_ltg(const GammaFactorization& fac);

// Adjacency matrix of the whole trellis, layers laid out consecutively.
BitMatrix ltg_adjacency(const TrellisGraph& ltg);

// Gate within one layer, indices local to that layer.
struct LayerCnot {
    std::size_t control;
    std::size_t target;
};

struct Theorem1Transform {
    std::vector<std::vector<LayerCnot>> layer_cnots; // one list per layer
    TrellisGraph target;                             // gamma'_a = [I_k | 0]
};

// Constructive local-CNOT equivalence: per-layer CNOT circuits mapping the
// trellis graph state onto k parallel path graphs plus isolated vertices.
Theorem1Transform theorem1_transform(const GammaFactorization& fac);

// Builds |ltg>, applies the per-layer circuits, and compares canonical
// stabilizers against |target>.
bool verify_equivalence(const TrellisGraph& ltg,
                        const std::vector<std::vector<LayerCnot>>& layer_cnots,
                        const TrellisGraph& target);

// Logical X readout of one layer: solves m * gt = x_layer.
// Returns nullopt when the outcome vector is inconsistent with the code.
std::optional<BitVec> transversal_decode(const BitVec& x_layer, const BitMatrix& gt);

} // namespace rgs
