#pragma once

#include <cstddef>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/protocol.hpp"

namespace rgs {

using EmissionOrdering = std::vector<std::size_t>;

// GF(2) rank of the adjacency block between a vertex subset and its
// complement; equals the bipartition entanglement entropy in ebits.
std::size_t cut_rank(const BitMatrix& adjacency, const std::vector<std::size_t>& subset);

// h(x) = cut_rank of the first x emitted vertices, for x = 0..N.
std::vector<std::size_t> height_function(const BitMatrix& adjacency,
                                         const EmissionOrdering& ordering);

std::size_t height_max(const BitMatrix& adjacency, const EmissionOrdering& ordering);

// Emission order (a): every left arm (first leaf then its second leaf),
// then every right arm.
EmissionOrdering ordering_a(const RgsArmMap& arms);

// Emission order (b): left and right arms alternating.
EmissionOrdering ordering_b(const RgsArmMap& arms);

// Greedy baseline: repeatedly emit the vertex minimizing the next cut-rank,
// lowest index on ties.
EmissionOrdering greedy_ordering(const BitMatrix& adjacency);

// Complete-graph resource state: 2n fully connected inner vertices, each
// with a dangling outer leaf. Returns the adjacency; inner vertex i is index
// i, its leaf is 2n + i.
BitMatrix build_crgs_adjacency(std::size_t n);

// Arm-by-arm order for the complete-graph state.
EmissionOrdering crgs_arm_ordering(std::size_t n);

} // namespace rgs
